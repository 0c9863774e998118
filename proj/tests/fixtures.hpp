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

#include <functional>

#include "hbnpuf/harness.hpp"
#include "hbnpuf/rng.hpp"

namespace fixtures {

using namespace hbnpuf;

/// Small manifest for hand-built datasets: sampled challenges, one 20 C
/// temperature, the requested dimensions.
inline DatasetManifest synthetic_manifest(std::uint32_t n_nodes, std::uint32_t n_chips,
                                          std::uint32_t n_challenges, std::uint32_t n_repeats,
                                          std::uint32_t n_stages) {
  DatasetManifest manifest;
  manifest.topology = generate_topology(std::max(4u, n_nodes), 1234, false);
  while (manifest.topology.n_nodes != n_nodes) {
    manifest.topology = generate_topology(n_nodes, 1234, false);
  }
  manifest.physics.m_stages = n_stages;
  manifest.protocol.mode = ChallengeMode::kSampled;
  manifest.protocol.n_challenges = n_challenges;
  manifest.protocol.n_repeats = n_repeats;
  manifest.protocol.sample_seed = 99;
  manifest.chip_seeds.resize(n_chips);
  for (std::uint32_t p = 0; p < n_chips; ++p) manifest.chip_seeds[p] = 100 + p;
  manifest.has_trivial = false;
  return manifest;
}

/// Dataset with every cell produced by fill(t, p, c, r, m).
inline CRPDataset synthetic_dataset(
    std::uint32_t n_nodes, std::uint32_t n_chips, std::uint32_t n_challenges,
    std::uint32_t n_repeats, std::uint32_t n_stages,
    const std::function<BitVec(std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t,
                               std::uint32_t)>& fill) {
  CRPDataset ds(synthetic_manifest(n_nodes, n_chips, n_challenges, n_repeats, n_stages));
  for (std::uint32_t t = 0; t < ds.n_temps(); ++t) {
    for (std::uint32_t p = 0; p < ds.n_chips(); ++p) {
      for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
        for (std::uint32_t r = 0; r < ds.n_repeats(); ++r) {
          for (std::uint32_t m = 0; m < ds.n_stages(); ++m) {
            ds.store_response(t, p, c, r, m, fill(t, p, c, r, m));
          }
        }
      }
    }
  }
  return ds;
}

inline BitVec random_bits(std::uint32_t n, SplitMix64& rng) {
  BitVec v(n);
  for (std::uint32_t i = 0; i < n; ++i) v.set(i, rng.next() & 1u);
  return v;
}

/// Small simulated dataset with default physics.
inline CRPDataset simulated_dataset(std::uint32_t n, std::uint32_t n_chips,
                                    std::uint32_t n_challenges, std::uint32_t n_repeats,
                                    std::uint32_t m_stages, std::uint64_t seed = 5,
                                    double sigma_noise_ps = -1.0) {
  NetworkTopology topo = generate_topology(n, seed, false);
  PhysicsConfig config;
  config.m_stages = m_stages;
  if (sigma_noise_ps >= 0.0) config.sigma_noise = sigma_noise_ps;
  QueryProtocol protocol;
  protocol.mode = ChallengeMode::kSampled;
  protocol.n_challenges = n_challenges;
  protocol.n_repeats = n_repeats;
  protocol.sample_seed = seed + 1;
  std::vector<std::uint64_t> chip_seeds(n_chips);
  for (std::uint32_t p = 0; p < n_chips; ++p) chip_seeds[p] = seed * 1000 + p;
  return collect(topo, config, chip_seeds, protocol);
}

}  // namespace fixtures
