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

#include <cstdint>
#include <vector>

#include "hbnpuf/harness.hpp"

namespace hbnpuf {

/// Binary context-tree weighting code length with the Krichevsky-Trofimov
/// leaf estimator. The tree is primed on `context` (counts updated, no code
/// cost attributed), then `target` is coded sequentially; each target bit's
/// context window may reach back into the context string. Returns
/// ceil(-log2 P_weighted(target)). Contexts shorter than `depth` at the very
/// start of the combined string are zero-padded.
///
/// Throws InfeasibleError when depth * target.size() exceeds node_budget.
std::uint64_t ctw_codeword_length(const std::vector<std::uint8_t>& context,
                                  const std::vector<std::uint8_t>& target, std::uint32_t depth,
                                  std::uint64_t node_budget = 50'000'000);

/// Minimum codeword length over depths [depth_lo, depth_hi].
std::uint64_t ctw_best_codeword_length(const std::vector<std::uint8_t>& context,
                                       const std::vector<std::uint8_t>& target,
                                       std::uint32_t depth_lo, std::uint32_t depth_hi,
                                       std::uint64_t node_budget = 50'000'000);

struct CtwHoldout {
  std::uint32_t chip;
  std::uint64_t codeword_bits;
};
struct CtwReport {
  double h_ctw_bits = 0.0;  // mean codeword length over hold-outs
  std::vector<CtwHoldout> holdouts;
};

/// Leave-one-chip-out compression estimate: for each chip, the other chips'
/// response rows (single repeat) concatenate into the context and the
/// held-out row is coded; H_CTW is the average codeword length. Depths are
/// swept over [depth_lo, depth_hi].
CtwReport h_ctw(const CRPDataset& dataset, std::uint32_t stage, std::uint32_t depth_lo = 0,
                std::uint32_t depth_hi = 20, std::uint32_t temp_index = 0);

}  // namespace hbnpuf
