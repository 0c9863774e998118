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

#include "hbnpuf/sensitivity.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/rng.hpp"
#include "hbnpuf/simulator.hpp"

namespace hbnpuf {

namespace {

constexpr std::uint64_t kSensitivityTag = 0x73656e7330303142ULL;

// Uniform valid challenge: the two trivial fixed points carry no information.
BitVec draw_valid_challenge(std::uint32_t n, SplitMix64& rng) {
  for (;;) {
    BitVec c(n);
    for (std::uint32_t i = 0; i < n; ++i) c.set(i, rng.next() & 1u);
    if (!c.all_zero() && !c.all_one()) return c;
  }
}

}  // namespace

BitFunction response_bit_function(const ChipInstance& chip, const PhysicsConfig& config,
                                  std::uint32_t stage, int target) {
  if (stage >= config.m_stages) throw ConfigError("response_bit_function: stage out of range");
  if (target != kTargetXorAll &&
      (target < 0 || static_cast<std::uint32_t>(target) >= chip.topology.n_nodes)) {
    throw ConfigError("response_bit_function: target must be a node index or xor-all");
  }
  auto quiet = std::make_shared<PhysicsConfig>(config);
  quiet->sigma_noise = 0.0;
  auto chip_copy = std::make_shared<ChipInstance>(chip);
  auto engine = std::make_shared<TransientEngine>(*chip_copy, *quiet);
  const double t_ref = quiet->t_ref;
  return [engine, quiet, chip_copy, stage, target, t_ref](const BitVec& challenge) {
    const Bitstream bs = engine->run(challenge, 0, t_ref);
    const BitVec& state = bs.states[stage];
    if (target == kTargetXorAll) return state.parity();
    return state.get(static_cast<std::size_t>(target));
  };
}

SensitivityEstimate average_sensitivity(const BitFunction& f, std::uint32_t n,
                                        std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("average_sensitivity: n_samples must be >= 1");
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    // Counter-based per-sample stream keeps the estimate independent of any
    // parallel evaluation order.
    SplitMix64 rng(derive_seed({kSensitivityTag, seed, s, 0xA5}));
    BitVec challenge = draw_valid_challenge(n, rng);
    const bool base = f(challenge);
    std::uint32_t flips = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      challenge.flip(i);
      flips += f(challenge) != base;
      challenge.flip(i);
    }
    sum += flips;
    sum_sq += static_cast<double>(flips) * flips;
  }
  SensitivityEstimate est;
  est.n_samples = n_samples;
  est.value = sum / static_cast<double>(n_samples);
  if (n_samples > 1) {
    const double var =
        (sum_sq - sum * sum / static_cast<double>(n_samples)) / static_cast<double>(n_samples - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples));
  }
  return est;
}

SensitivityEstimate noise_sensitivity(const BitFunction& f, std::uint32_t n, double epsilon,
                                      std::uint64_t n_samples, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw ConfigError("noise_sensitivity: epsilon must be in (0, 0.5]");
  }
  if (n_samples < 1) throw ConfigError("noise_sensitivity: n_samples must be >= 1");
  std::uint64_t changed = 0;
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    SplitMix64 rng(derive_seed({kSensitivityTag, seed, s, 0x5A}));
    BitVec challenge = draw_valid_challenge(n, rng);
    const bool base = f(challenge);
    BitVec noisy = challenge;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (rng.uniform01() < epsilon) noisy.flip(i);
    }
    changed += f(noisy) != base;
  }
  SensitivityEstimate est;
  est.n_samples = n_samples;
  est.value = static_cast<double>(changed) / static_cast<double>(n_samples);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n_samples));
  return est;
}

void write_sensitivity_csv(const std::string& path, const std::vector<SensitivityRow>& rows,
                           std::uint64_t input_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(input_hash));
  out << "# input_hash=" << hex << "\n";
  out << "target,as,as_stderr,ns,ns_stderr,epsilon,n_samples\n";
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& row : rows) {
    out << row.target << ',' << fmt(row.as.value) << ',' << fmt(row.as.std_error) << ','
        << fmt(row.ns.value) << ',' << fmt(row.ns.std_error) << ',' << fmt(row.epsilon) << ','
        << row.ns.n_samples << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace hbnpuf
