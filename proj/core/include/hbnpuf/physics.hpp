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

#include "hbnpuf/topology.hpp"

namespace hbnpuf {

/// Supported operating temperature window, degrees C.
inline constexpr double kTempMinC = -40.0;
inline constexpr double kTempMaxC = 60.0;

// Physical parameter model. A gate (XOR + multiplexer, or one inverter pair
// of the delay line) nominally takes 2*tau_mean. Frozen manufacturing
// variation multiplies each delay by an independent Normal(1, sigma_mfg)
// sample floored at 0.1; noise jitters every transition by
// Normal(0, sigma_noise * exp(chaos_rate * t)), the exponential factor
// standing in for the chaotic amplification of accumulated analog timing
// divergence; pulses narrower than pulse_filter_width do not propagate.
// Temperature rescales network and delay-line timescales by
// (1 + alpha*(T - t_ref)) with separate coefficients.
struct PhysicsConfig {
  double tau_mean = 0.25;           // ns, mean single-inverter delay
  double sigma_mfg = 0.03;          // relative std-dev of frozen variation
  double sigma_noise = 0.013;       // ps, transition jitter std-dev at t=0
  double chaos_rate = 0.72;         // 1/ns, exponential jitter growth rate
  double pulse_filter_width = 0.35; // ns, minimum propagatable pulse width
  std::uint32_t m_stages = 32;      // delay-line inverter pairs
  std::uint32_t hold_cycles = 4;    // reset hold, 200 MHz cycles (idealized)
  double alpha_net = 0.001;         // 1/degC, network gates
  double alpha_dl = 0.0011;         // 1/degC, delay-line gates
  double t_ref = 20.0;              // degC

  double gate_delay() const { return 2.0 * tau_mean; }

  /// Throws ConfigError unless every invariant holds (positive timescales,
  /// nonnegative spreads, delays positive over the whole temperature window).
  void validate() const;
};

/// JSON round trip with exactly the field names above. Unknown keys are a
/// hard error; missing keys keep their defaults.
std::string physics_to_json(const PhysicsConfig& config);
PhysicsConfig physics_from_json(const std::string& text);
void save_physics(const PhysicsConfig& config, const std::string& path);
PhysicsConfig load_physics(const std::string& path);

// One manufactured copy of a PUF class: the topology plus frozen per-edge and
// per-readout-stage delays. Fully determined by (topology, config, chip_seed).
struct ChipInstance {
  std::uint32_t chip_id = 0;
  std::uint64_t chip_seed = 0;
  NetworkTopology topology;
  std::vector<std::array<double, 3>> edge_delay;  // ns, [node][input k]
  std::vector<double> readout_delay;              // ns, [stage]
};

ChipInstance sample_chip(const NetworkTopology& topology, const PhysicsConfig& config,
                         std::uint64_t chip_seed, std::uint32_t chip_id = 0);

/// Temperature scale factors for the two timescales. Throws ConfigError for
/// temperatures outside [kTempMinC, kTempMaxC].
struct TemperatureScale {
  double network = 1.0;
  double readout = 1.0;
};
TemperatureScale temperature_scale(const PhysicsConfig& config, double temperature_c);

// Materialized temperature-scaled view of a chip's delays. At T = t_ref it
// equals the frozen delays exactly.
struct ScaledDelays {
  std::vector<std::array<double, 3>> edge_delay;
  std::vector<double> readout_delay;
  std::vector<double> capture_times;  // cumulative readout delays
};
ScaledDelays effective_delays(const ChipInstance& chip, const PhysicsConfig& config,
                              double temperature_c);

}  // namespace hbnpuf
