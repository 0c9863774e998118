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

#include "hbnpuf/harness.hpp"

#include <atomic>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/rng.hpp"

namespace hbnpuf {

namespace {

constexpr std::uint64_t kSampleTag = 0x73616d706c656368ULL;
constexpr std::uint64_t kNoiseTag = 0x636f6c6c65637431ULL;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path);
}

nlohmann::ordered_json protocol_to_json(const QueryProtocol& p) {
  nlohmann::ordered_json j;
  j["mode"] = p.mode == ChallengeMode::kExhaustive ? "exhaustive" : "sampled";
  j["n_challenges"] = p.n_challenges;
  j["n_repeats"] = p.n_repeats;
  j["sample_seed"] = p.sample_seed;
  j["noise_salt"] = p.noise_salt;
  j["stage_lo"] = p.stage_lo;
  j["stage_hi"] = p.stage_hi;
  j["temperatures"] = p.temperatures;
  return j;
}

QueryProtocol protocol_from_json(const nlohmann::json& j) {
  QueryProtocol p;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "exhaustive") {
    p.mode = ChallengeMode::kExhaustive;
  } else if (mode == "sampled") {
    p.mode = ChallengeMode::kSampled;
  } else {
    throw DataError("manifest: unknown challenge mode '" + mode + "'");
  }
  p.n_challenges = j.at("n_challenges").get<std::uint32_t>();
  p.n_repeats = j.at("n_repeats").get<std::uint32_t>();
  p.sample_seed = j.at("sample_seed").get<std::uint64_t>();
  p.noise_salt = j.at("noise_salt").get<std::uint64_t>();
  p.stage_lo = j.at("stage_lo").get<std::uint32_t>();
  p.stage_hi = j.at("stage_hi").get<std::uint32_t>();
  p.temperatures = j.at("temperatures").get<std::vector<double>>();
  return p;
}

}  // namespace

void QueryProtocol::validate(std::uint32_t n_nodes, const PhysicsConfig& config) const {
  if (n_repeats < 1) throw ConfigError("protocol: n_repeats must be >= 1");
  if (n_challenges < 1) throw ConfigError("protocol: n_challenges must be >= 1");
  if (temperatures.empty()) throw ConfigError("protocol: temperature list is empty");
  for (double t : temperatures) temperature_scale(config, t);  // range check
  const std::uint32_t hi = resolved_stage_hi(config);
  if (stage_lo < 1 || stage_lo > hi || hi > config.m_stages) {
    throw ConfigError("protocol: capture stage range must satisfy 1 <= lo <= hi <= M");
  }
  if (mode == ChallengeMode::kExhaustive) {
    if (n_nodes > 16) {
      throw InfeasibleError(
          "protocol: exhaustive challenges only for N <= 16; use sampled mode (default 1000)");
    }
    const std::uint64_t n_vc = (std::uint64_t{1} << n_nodes) - 2;
    if (n_challenges != n_vc) {
      throw ConfigError("protocol: exhaustive mode requires n_challenges = 2^N - 2 = " +
                        std::to_string(n_vc));
    }
  } else {
    if (n_nodes < 64) {
      const std::uint64_t n_vc = (std::uint64_t{1} << n_nodes) - 2;
      if (n_challenges > n_vc) {
        throw ConfigError("protocol: more sampled challenges than valid challenges exist");
      }
    }
  }
}

std::vector<BitVec> enumerate_valid_challenges(std::uint32_t n) {
  if (n < 2) throw ConfigError("enumerate_valid_challenges: n must be >= 2");
  if (n > 16) {
    throw InfeasibleError("enumerate_valid_challenges: 2^" + std::to_string(n) +
                          " challenges is out of exhaustive reach; use sampled mode");
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<BitVec> out;
  out.reserve(total - 2);
  for (std::uint64_t value = 1; value + 1 < total; ++value) {
    out.push_back(BitVec::from_index(value, n));
  }
  return out;
}

std::vector<BitVec> sample_valid_challenges(std::uint32_t n, std::uint32_t count,
                                            std::uint64_t seed) {
  if (n < 2) throw ConfigError("sample_valid_challenges: n must be >= 2");
  if (n < 64) {
    const std::uint64_t n_vc = (std::uint64_t{1} << n) - 2;
    if (count > n_vc) {
      throw ConfigError("sample_valid_challenges: requested more than 2^n - 2 challenges");
    }
  }
  SplitMix64 rng(derive_seed({kSampleTag, seed, n}));
  std::vector<BitVec> out;
  out.reserve(count);
  std::set<std::vector<std::uint64_t>> seen;
  while (out.size() < count) {
    BitVec candidate(n);
    for (std::uint32_t i = 0; i < n; ++i) candidate.set(i, rng.next() & 1u);
    if (candidate.all_zero() || candidate.all_one()) continue;
    if (!seen.insert(candidate.words()).second) continue;
    out.push_back(std::move(candidate));
  }
  return out;
}

CRPDataset::CRPDataset(DatasetManifest manifest) : manifest_(std::move(manifest)) {
  validate_topology(manifest_.topology);
  manifest_.physics.validate();
  manifest_.protocol.validate(manifest_.topology.n_nodes, manifest_.physics);
  if (manifest_.chip_seeds.empty()) throw ConfigError("dataset: chip_seeds is empty");

  const std::uint32_t n = manifest_.topology.n_nodes;
  if (manifest_.protocol.mode == ChallengeMode::kExhaustive) {
    challenges_ = enumerate_valid_challenges(n);
  } else {
    challenges_ = sample_valid_challenges(n, manifest_.protocol.n_challenges,
                                          manifest_.protocol.sample_seed);
  }
  n_stages_ = manifest_.protocol.resolved_stage_hi(manifest_.physics) -
              manifest_.protocol.stage_lo + 1;
  cell_bytes_ = (n + 7) / 8;

  const std::size_t cells = static_cast<std::size_t>(n_temps()) * n_chips() * n_challenges() *
                            n_repeats() * n_stages_;
  const std::size_t trivial_cells =
      static_cast<std::size_t>(n_temps()) * n_chips() * 2 * n_repeats() * n_stages_;
  bits_.assign(cells * cell_bytes_, 0);
  trivial_bits_.assign(trivial_cells * cell_bytes_, 0);
}

void CRPDataset::store_response(std::uint32_t t, std::uint32_t p, std::uint32_t c,
                                std::uint32_t r, std::uint32_t m, const BitVec& state) {
  if (state.size() != n_nodes()) throw DataError("store_response: state length != N");
  state.copy_to_bytes(cell_mut(t, p, c, r, m));
}

std::uint64_t CRPDataset::data_hash() const {
  std::uint64_t h = fnv1a64(reinterpret_cast<const char*>(bits_.data()), bits_.size());
  h = mix64(h ^ fnv1a64(reinterpret_cast<const char*>(trivial_bits_.data()),
                        trivial_bits_.size()));
  return h;
}

std::string CRPDataset::manifest_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = manifest_.format_version;
  j["role"] = manifest_.role;
  j["layout"] = "row-major (temperature, chip, challenge, repeat, stage); one byte-aligned "
                "N-bit cell per state, node 0 = LSB of byte 0";
  j["topology"] = nlohmann::ordered_json::parse(topology_to_json(manifest_.topology));
  j["physics"] = nlohmann::ordered_json::parse(physics_to_json(manifest_.physics));
  j["protocol"] = protocol_to_json(manifest_.protocol);
  j["chip_seeds"] = manifest_.chip_seeds;
  j["has_trivial"] = manifest_.has_trivial;
  j["n_challenges_realized"] = n_challenges();
  j["main_bytes"] = bits_.size();
  j["trivial_bytes"] = trivial_bits_.size();
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(data_hash()));
  j["data_hash"] = hex;
  j["tool"] = manifest_.tool;
  j["command"] = manifest_.command;
  return j.dump(2) + "\n";
}

void CRPDataset::save(const std::string& prefix) const {
  write_file(prefix + ".manifest.json", manifest_json());
  std::string blob;
  blob.reserve(bits_.size() + trivial_bits_.size());
  blob.append(reinterpret_cast<const char*>(bits_.data()), bits_.size());
  blob.append(reinterpret_cast<const char*>(trivial_bits_.data()), trivial_bits_.size());
  write_file(prefix + ".crp.bin", blob);
}

CRPDataset CRPDataset::load(const std::string& prefix) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(prefix + ".manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest parse error: ") + e.what());
  }
  DatasetManifest manifest;
  try {
    manifest.format_version = j.at("format_version").get<std::uint32_t>();
    if (manifest.format_version != 1) {
      throw DataError("manifest: unsupported format_version");
    }
    manifest.role = j.at("role").get<std::string>();
    manifest.topology = topology_from_json(j.at("topology").dump());
    manifest.physics = physics_from_json(j.at("physics").dump());
    manifest.protocol = protocol_from_json(j.at("protocol"));
    manifest.chip_seeds = j.at("chip_seeds").get<std::vector<std::uint64_t>>();
    manifest.has_trivial = j.at("has_trivial").get<bool>();
    manifest.tool = j.at("tool").get<std::string>();
    manifest.command = j.at("command").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }

  CRPDataset ds(std::move(manifest));
  const std::string blob = read_file(prefix + ".crp.bin");
  if (blob.size() != ds.bits_.size() + ds.trivial_bits_.size()) {
    throw DataError(prefix + ".crp.bin: size " + std::to_string(blob.size()) +
                    " does not match manifest dimensions");
  }
  std::memcpy(ds.bits_.data(), blob.data(), ds.bits_.size());
  std::memcpy(ds.trivial_bits_.data(), blob.data() + ds.bits_.size(), ds.trivial_bits_.size());
  if (j.contains("data_hash")) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(ds.data_hash()));
    if (j["data_hash"].get<std::string>() != hex) {
      throw DataError(prefix + ": data_hash mismatch (corrupt or edited dataset)");
    }
  }
  return ds;
}

CRPDataset collect(const NetworkTopology& topology, const PhysicsConfig& config,
                   const std::vector<std::uint64_t>& chip_seeds, const QueryProtocol& protocol,
                   const std::string& role, unsigned workers) {
  DatasetManifest manifest;
  manifest.role = role;
  manifest.topology = topology;
  manifest.physics = config;
  manifest.protocol = protocol;
  manifest.chip_seeds = chip_seeds;
  CRPDataset ds(std::move(manifest));

  std::vector<ChipInstance> chips;
  chips.reserve(chip_seeds.size());
  for (std::uint32_t p = 0; p < chip_seeds.size(); ++p) {
    chips.push_back(sample_chip(topology, config, chip_seeds[p], p));
  }

  const std::uint32_t n = topology.n_nodes;
  const std::uint32_t stage_lo = protocol.stage_lo;
  const std::uint32_t n_units = ds.n_temps() * ds.n_chips();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, n_units);

  std::atomic<std::uint32_t> next_unit{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker_fn = [&]() {
    try {
      const BitVec all_zero = BitVec::zeros(n);
      const BitVec all_one = BitVec::ones(n);
      for (;;) {
        const std::uint32_t unit = next_unit.fetch_add(1);
        if (unit >= n_units) return;
        const std::uint32_t t = unit / ds.n_chips();
        const std::uint32_t p = unit % ds.n_chips();
        const double temp = protocol.temperatures[t];
        TransientEngine engine(chips[p], config);

        auto run_into = [&](const BitVec& challenge, std::uint32_t c, std::uint32_t r,
                            bool trivial, std::uint32_t kind) {
          const std::uint64_t noise_seed =
              derive_seed({kNoiseTag, protocol.noise_salt, chip_seeds[p], challenge.hash64(),
                           r, t, trivial ? ~std::uint64_t{0} : 0});
          Bitstream bs;
          try {
            bs = engine.run(challenge, noise_seed, temp);
          } catch (const SimulationError& e) {
            throw SimulationError(std::string(e.what()) + " [chip " + std::to_string(p) +
                                  ", challenge " + challenge.to_string() + ", repeat " +
                                  std::to_string(r) + "]");
          }
          for (std::uint32_t m = 0; m < ds.n_stages(); ++m) {
            const BitVec& state = bs.states[stage_lo - 1 + m];
            state.copy_to_bytes(trivial ? ds.trivial_cell_mut(t, p, kind, r, m)
                                        : ds.cell_mut(t, p, c, r, m));
          }
        };

        for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
          for (std::uint32_t r = 0; r < ds.n_repeats(); ++r) {
            run_into(ds.challenges()[c], c, r, false, 0);
          }
        }
        for (std::uint32_t r = 0; r < ds.n_repeats(); ++r) {
          run_into(all_zero, 0, r, true, 0);
          run_into(all_one, 0, r, true, 1);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return ds;
}

GlitchReport glitch_check(const CRPDataset& dataset) {
  if (!dataset.manifest().has_trivial) {
    throw DataError("glitch_check: dataset has no trivial-challenge section");
  }
  const std::uint32_t n = dataset.n_nodes();
  const BitVec expected[2] = {BitVec::zeros(n), BitVec::ones(n)};
  GlitchReport report;
  for (std::uint32_t t = 0; t < dataset.n_temps(); ++t) {
    for (std::uint32_t p = 0; p < dataset.n_chips(); ++p) {
      for (std::uint32_t kind = 0; kind < 2; ++kind) {
        for (std::uint32_t r = 0; r < dataset.n_repeats(); ++r) {
          for (std::uint32_t m = 0; m < dataset.n_stages(); ++m) {
            if (dataset.trivial_response(t, p, kind, r, m) != expected[kind]) {
              ++report.violations;
              if (report.evidence.size() < 16) {
                report.evidence.push_back(
                    GlitchOffender{t, p, r, dataset.stage_number(m), kind});
              }
            }
          }
        }
      }
    }
  }
  report.pass = report.violations == 0;
  return report;
}

HelperMask::HelperMask(std::uint32_t n_chips, std::uint32_t n_challenges, std::uint32_t n_stages,
                       std::uint32_t n_nodes, std::uint32_t stage_lo, double threshold)
    : n_chips_(n_chips),
      n_challenges_(n_challenges),
      n_stages_(n_stages),
      n_nodes_(n_nodes),
      stage_lo_(stage_lo),
      threshold_(threshold),
      cell_bytes_((n_nodes + 7) / 8) {
  bits_.assign(static_cast<std::size_t>(n_chips) * n_challenges * n_stages * cell_bytes_, 0);
}

void HelperMask::store(std::uint32_t p, std::uint32_t c, std::uint32_t m, const BitVec& mask) {
  if (mask.size() != n_nodes_) throw DataError("HelperMask::store: mask length != N");
  mask.copy_to_bytes(bits_.data() + index(p, c, m) * cell_bytes_);
}

std::vector<double> HelperMask::stable_bits_per_stage() const {
  std::vector<double> mean(n_stages_, 0.0);
  for (std::uint32_t p = 0; p < n_chips_; ++p) {
    for (std::uint32_t c = 0; c < n_challenges_; ++c) {
      for (std::uint32_t m = 0; m < n_stages_; ++m) {
        mean[m] += static_cast<double>(mask(p, c, m).popcount());
      }
    }
  }
  const double cells = static_cast<double>(n_chips_) * n_challenges_;
  for (double& v : mean) v /= cells;
  return mean;
}

void HelperMask::save(const std::string& prefix) const {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["n_chips"] = n_chips_;
  j["n_challenges"] = n_challenges_;
  j["n_stages"] = n_stages_;
  j["n_nodes"] = n_nodes_;
  j["stage_lo"] = stage_lo_;
  j["threshold"] = threshold_;
  j["layout"] = "row-major (chip, challenge, stage); one byte-aligned N-bit keep-mask per cell";
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(reinterpret_cast<const char*>(bits_.data()), bits_.size())));
  j["data_hash"] = hex;
  write_file(prefix + ".helper.json", j.dump(2) + "\n");
  write_file(prefix + ".helper.bin",
             std::string(reinterpret_cast<const char*>(bits_.data()), bits_.size()));
}

HelperMask HelperMask::load(const std::string& prefix) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(prefix + ".helper.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("helper mask parse error: ") + e.what());
  }
  HelperMask mask(j.at("n_chips").get<std::uint32_t>(), j.at("n_challenges").get<std::uint32_t>(),
                  j.at("n_stages").get<std::uint32_t>(), j.at("n_nodes").get<std::uint32_t>(),
                  j.at("stage_lo").get<std::uint32_t>(), j.at("threshold").get<double>());
  const std::string blob = read_file(prefix + ".helper.bin");
  if (blob.size() != mask.bits_.size()) {
    throw DataError(prefix + ".helper.bin: size does not match dimensions");
  }
  std::memcpy(mask.bits_.data(), blob.data(), blob.size());
  return mask;
}

HelperMask cherry_pick(const CRPDataset& enroll, double threshold, std::uint32_t temp_index) {
  if (!(threshold >= 0.0 && threshold <= 0.5)) {
    throw ConfigError("cherry_pick: threshold must be in [0, 0.5]");
  }
  if (enroll.n_repeats() < 2) {
    throw DataError("cherry_pick: enrollment needs >= 2 repeats");
  }
  if (temp_index >= enroll.n_temps()) throw DataError("cherry_pick: temp_index out of range");

  const std::uint32_t n = enroll.n_nodes();
  const std::uint32_t repeats = enroll.n_repeats();
  HelperMask helper(enroll.n_chips(), enroll.n_challenges(), enroll.n_stages(), n,
                    enroll.manifest().protocol.stage_lo, threshold);

  std::vector<std::uint32_t> ones(n);
  for (std::uint32_t p = 0; p < enroll.n_chips(); ++p) {
    for (std::uint32_t c = 0; c < enroll.n_challenges(); ++c) {
      for (std::uint32_t m = 0; m < enroll.n_stages(); ++m) {
        std::fill(ones.begin(), ones.end(), 0);
        for (std::uint32_t r = 0; r < repeats; ++r) {
          const BitVec state = enroll.response(temp_index, p, c, r, m);
          for (std::uint32_t i = 0; i < n; ++i) ones[i] += state.get(i) ? 1u : 0u;
        }
        BitVec keep(n);
        for (std::uint32_t i = 0; i < n; ++i) {
          const std::uint32_t flips = std::min(ones[i], repeats - ones[i]);
          const double rate = static_cast<double>(flips) / static_cast<double>(repeats);
          keep.set(i, rate <= threshold);
        }
        helper.store(p, c, m, keep);
      }
    }
  }
  return helper;
}

MaskedResponse apply_mask(const BitVec& response, const BitVec& mask) {
  if (response.size() != mask.size()) throw DataError("apply_mask: dimension mismatch");
  MaskedResponse out;
  out.count = mask.popcount();
  out.bits = BitVec(out.count);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.get(i)) out.bits.set(pos++, response.get(i));
  }
  return out;
}

}  // namespace hbnpuf
