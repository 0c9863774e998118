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
#include <functional>
#include <string>
#include <vector>

#include "hbnpuf/physics.hpp"

namespace hbnpuf {

using BitFunction = std::function<bool(const BitVec&)>;

/// XOR of the whole response instead of a single bit index.
inline constexpr int kTargetXorAll = -1;

/// Challenge -> single response bit, evaluated by a zero-noise transient run
/// of the chip at the reference temperature. stage is the stored snapshot
/// index (0-based); target is a node index or kTargetXorAll. The returned
/// function owns its engine and is not thread-safe; make one per thread.
BitFunction response_bit_function(const ChipInstance& chip, const PhysicsConfig& config,
                                  std::uint32_t stage, int target);

struct SensitivityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
};

/// Average sensitivity: expected number of single-input flips that change
/// f(C), over uniformly sampled valid challenges C. In [0, n].
SensitivityEstimate average_sensitivity(const BitFunction& f, std::uint32_t n,
                                        std::uint64_t n_samples, std::uint64_t seed);

/// Noise sensitivity: Pr[f(C) != f(C xor eta)] with each eta bit 1 with
/// probability epsilon. In [0, 1].
SensitivityEstimate noise_sensitivity(const BitFunction& f, std::uint32_t n, double epsilon,
                                      std::uint64_t n_samples, std::uint64_t seed);

struct SensitivityRow {
  std::string target;  // "xor" or "bit:<i>"
  SensitivityEstimate as;
  SensitivityEstimate ns;
  double epsilon;
};
void write_sensitivity_csv(const std::string& path, const std::vector<SensitivityRow>& rows,
                           std::uint64_t input_hash);

}  // namespace hbnpuf
