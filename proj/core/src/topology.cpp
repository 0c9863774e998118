// Copyright 2026 The hbnpuf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hbnpuf/topology.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/rng.hpp"

namespace hbnpuf {

namespace {

// Stream tags keep independent draws from aliasing each other.
constexpr std::uint64_t kTopologyTag = 0x746f706f6c6f6779ULL;

std::array<std::uint32_t, 3> draw_inputs_relaxed(std::uint32_t node, std::uint32_t n,
                                                 SplitMix64& rng) {
  // Without replacement from the N-1 other nodes, order kept as drawn.
  std::array<std::uint32_t, 3> picked{};
  for (int k = 0; k < 3; ++k) {
    for (;;) {
      auto candidate = static_cast<std::uint32_t>(rng.below(n - 1));
      if (candidate >= node) ++candidate;  // skip self
      bool duplicate = false;
      for (int j = 0; j < k; ++j) duplicate |= (picked[j] == candidate);
      if (!duplicate) {
        picked[k] = candidate;
        break;
      }
    }
  }
  return picked;
}

}  // namespace

NetworkTopology generate_topology(std::uint32_t n, std::uint64_t seed, bool strict_out_regular,
                                  std::uint32_t max_retries) {
  if (n < 4) {
    throw ConfigError("generate_topology: n must be >= 4 (three distinct non-self inputs)");
  }
  NetworkTopology topology;
  topology.n_nodes = n;
  topology.seed = seed;
  topology.strict_out_regular = strict_out_regular;
  topology.in_edges.resize(n);

  SplitMix64 rng(derive_seed({kTopologyTag, seed, n, strict_out_regular ? 1u : 0u}));

  if (!strict_out_regular) {
    for (std::uint32_t i = 0; i < n; ++i) {
      topology.in_edges[i] = draw_inputs_relaxed(i, n, rng);
    }
    return topology;
  }

  // Strict mode: shuffle a multiset with every node appearing 3 times and
  // hand node i the stubs 3i..3i+2. Reject self-loops and duplicates.
  std::vector<std::uint32_t> stubs(3 * static_cast<std::size_t>(n));
  for (std::uint32_t attempt = 0; attempt <= max_retries; ++attempt) {
    for (std::uint32_t i = 0; i < n; ++i) {
      stubs[3 * i] = i;
      stubs[3 * i + 1] = i;
      stubs[3 * i + 2] = i;
    }
    shuffle(stubs.data(), stubs.size(), rng);
    bool ok = true;
    for (std::uint32_t i = 0; i < n && ok; ++i) {
      const std::uint32_t a = stubs[3 * i], b = stubs[3 * i + 1], c = stubs[3 * i + 2];
      ok = a != i && b != i && c != i && a != b && a != c && b != c;
    }
    if (ok) {
      for (std::uint32_t i = 0; i < n; ++i) {
        topology.in_edges[i] = {stubs[3 * i], stubs[3 * i + 1], stubs[3 * i + 2]};
      }
      return topology;
    }
  }
  throw InfeasibleError("generate_topology: unsatisfiable regularity after " +
                        std::to_string(max_retries) + " retries (n=" + std::to_string(n) + ")");
}

void validate_topology(const NetworkTopology& topology) {
  const std::uint32_t n = topology.n_nodes;
  if (n < 4) throw DataError("topology: n_nodes must be >= 4");
  if (topology.in_edges.size() != n) throw DataError("topology: in_edges size != n_nodes");
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& e = topology.in_edges[i];
    for (std::uint32_t src : e) {
      if (src >= n) throw DataError("topology: source index out of range");
      if (src == i) throw DataError("topology: node " + std::to_string(i) + " is its own input");
    }
    if (e[0] == e[1] || e[0] == e[2] || e[1] == e[2]) {
      throw DataError("topology: node " + std::to_string(i) + " has duplicate sources");
    }
  }
  if (topology.strict_out_regular) {
    for (std::uint32_t d : out_degrees(topology)) {
      if (d != 3) throw DataError("topology: strict mode requires out-degree 3 everywhere");
    }
  }
}

std::vector<std::uint32_t> out_degrees(const NetworkTopology& topology) {
  std::vector<std::uint32_t> degree(topology.n_nodes, 0);
  for (const auto& e : topology.in_edges) {
    for (std::uint32_t src : e) ++degree[src];
  }
  return degree;
}

BitVec synchronous_update(const NetworkTopology& topology, const BitVec& state) {
  if (state.size() != topology.n_nodes) throw DataError("synchronous_update: state length != N");
  BitVec next(topology.n_nodes);
  for (std::uint32_t i = 0; i < topology.n_nodes; ++i) {
    const auto& e = topology.in_edges[i];
    next.set(i, state.get(e[0]) ^ state.get(e[1]) ^ state.get(e[2]));
  }
  return next;
}

std::vector<BitVec> find_fixed_points_bruteforce(const NetworkTopology& topology,
                                                 std::uint32_t limit) {
  const std::uint32_t n = topology.n_nodes;
  if (n > limit || n >= 64) {
    throw InfeasibleError("find_fixed_points_bruteforce: exhaustive search infeasible for N=" +
                          std::to_string(n) + " (limit " + std::to_string(limit) + ")");
  }
  // Work on raw integers with the challenge-index convention: node i is bit
  // (n-1-i), so ascending integers are ascending challenge strings.
  std::vector<std::uint64_t> shift(n);
  for (std::uint32_t i = 0; i < n; ++i) shift[i] = n - 1 - i;

  std::vector<BitVec> fixed;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < total; ++s) {
    bool is_fixed = true;
    for (std::uint32_t i = 0; i < n && is_fixed; ++i) {
      const auto& e = topology.in_edges[i];
      const std::uint64_t v =
          ((s >> shift[e[0]]) ^ (s >> shift[e[1]]) ^ (s >> shift[e[2]])) & 1u;
      is_fixed = v == ((s >> shift[i]) & 1u);
    }
    if (is_fixed) fixed.push_back(BitVec::from_index(s, n));
  }
  return fixed;
}

std::string topology_to_json(const NetworkTopology& topology) {
  nlohmann::ordered_json j;
  j["n"] = topology.n_nodes;
  j["seed"] = topology.seed;
  j["strict"] = topology.strict_out_regular;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : topology.in_edges) {
    edges.push_back({e[0], e[1], e[2]});
  }
  j["in_edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

NetworkTopology topology_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("topology JSON parse error: ") + e.what());
  }
  NetworkTopology topology;
  try {
    topology.n_nodes = j.at("n").get<std::uint32_t>();
    topology.seed = j.at("seed").get<std::uint64_t>();
    topology.strict_out_regular = j.at("strict").get<bool>();
    for (const auto& e : j.at("in_edges")) {
      if (e.size() != 3) throw DataError("topology JSON: in_edges entries must be triples");
      topology.in_edges.push_back(
          {e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(), e[2].get<std::uint32_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("topology JSON: ") + e.what());
  }
  validate_topology(topology);
  return topology;
}

void save_topology(const NetworkTopology& topology, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << topology_to_json(topology);
  if (!out) throw DataError("write failed: " + path);
}

NetworkTopology load_topology(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return topology_from_json(ss.str());
}

}  // namespace hbnpuf
