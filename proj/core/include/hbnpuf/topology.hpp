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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hbnpuf/bitvec.hpp"

namespace hbnpuf {

// Wiring diagram of the autonomous network: N nodes, each computing the
// 3-input XOR of three distinct other nodes. A (n_nodes, seed, strict) triple
// regenerates the same wiring bit for bit.
struct NetworkTopology {
  std::uint32_t n_nodes = 0;
  std::uint64_t seed = 0;
  bool strict_out_regular = false;
  std::vector<std::array<std::uint32_t, 3>> in_edges;  // [node][k] = source node

  bool operator==(const NetworkTopology&) const = default;
};

/// Builds a random 3-in network on n >= 4 nodes. Relaxed mode draws each
/// node's inputs independently (without replacement, never itself); strict
/// mode additionally forces every out-degree to 3 by shuffling a 3-per-node
/// stub multiset and rejecting assignments with self-loops or duplicate
/// sources, up to max_retries reshuffles.
NetworkTopology generate_topology(std::uint32_t n, std::uint64_t seed, bool strict_out_regular,
                                  std::uint32_t max_retries = 1000);

/// Checks every structural invariant (degree, self-loops, duplicates, and
/// out-regularity when strict). Throws DataError on violation.
void validate_topology(const NetworkTopology& topology);

/// Out-degree of every node.
std::vector<std::uint32_t> out_degrees(const NetworkTopology& topology);

/// One synchronous step of the Boolean XOR network.
BitVec synchronous_update(const NetworkTopology& topology, const BitVec& state);

/// Exhaustive fixed-point search over all 2^N states, N <= limit. The result
/// is ascending in challenge-index order and always contains the all-zero and
/// all-one states.
std::vector<BitVec> find_fixed_points_bruteforce(const NetworkTopology& topology,
                                                 std::uint32_t limit = 20);

/// JSON serialization with fields {n, seed, strict, in_edges}; 0-based nodes.
std::string topology_to_json(const NetworkTopology& topology);
NetworkTopology topology_from_json(const std::string& text);

void save_topology(const NetworkTopology& topology, const std::string& path);
NetworkTopology load_topology(const std::string& path);

}  // namespace hbnpuf
