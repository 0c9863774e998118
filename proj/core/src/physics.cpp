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

#include "hbnpuf/physics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/rng.hpp"

namespace hbnpuf {

namespace {

constexpr std::uint64_t kChipDelayTag = 0x636869702d646c79ULL;
constexpr double kVariationFloor = 0.1;

double scale_at(double alpha, double t, double t_ref) { return 1.0 + alpha * (t - t_ref); }

}  // namespace

void PhysicsConfig::validate() const {
  if (!(tau_mean > 0.0)) throw ConfigError("physics: tau_mean must be > 0");
  if (!(sigma_mfg >= 0.0)) throw ConfigError("physics: sigma_mfg must be >= 0");
  if (!(sigma_noise >= 0.0)) throw ConfigError("physics: sigma_noise must be >= 0");
  if (!(chaos_rate >= 0.0)) throw ConfigError("physics: chaos_rate must be >= 0");
  if (!(pulse_filter_width >= 0.0)) throw ConfigError("physics: pulse_filter_width must be >= 0");
  if (m_stages < 1) throw ConfigError("physics: m_stages must be >= 1");
  if (hold_cycles < 1) throw ConfigError("physics: hold_cycles must be >= 1");
  if (!(t_ref >= kTempMinC && t_ref <= kTempMaxC)) {
    throw ConfigError("physics: t_ref outside supported temperature range");
  }
  // Delays must stay positive across the whole supported window.
  for (double t : {kTempMinC, kTempMaxC}) {
    if (!(scale_at(alpha_net, t, t_ref) > 0.0) || !(scale_at(alpha_dl, t, t_ref) > 0.0)) {
      throw ConfigError("physics: temperature scaling drives delays non-positive in [-40, 60] C");
    }
  }
}

std::string physics_to_json(const PhysicsConfig& config) {
  nlohmann::ordered_json j;
  j["tau_mean"] = config.tau_mean;
  j["sigma_mfg"] = config.sigma_mfg;
  j["sigma_noise"] = config.sigma_noise;
  j["chaos_rate"] = config.chaos_rate;
  j["pulse_filter_width"] = config.pulse_filter_width;
  j["m_stages"] = config.m_stages;
  j["hold_cycles"] = config.hold_cycles;
  j["alpha_net"] = config.alpha_net;
  j["alpha_dl"] = config.alpha_dl;
  j["t_ref"] = config.t_ref;
  return j.dump(2) + "\n";
}

PhysicsConfig physics_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("physics JSON parse error: ") + e.what());
  }
  PhysicsConfig config;
  // Unknown keys are a hard error so a typo cannot silently change physics.
  static const char* known[] = {"tau_mean",   "sigma_mfg",   "sigma_noise",
                                "chaos_rate", "pulse_filter_width", "m_stages",
                                "hold_cycles", "alpha_net",  "alpha_dl",    "t_ref"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok |= (it.key() == k);
    if (!ok) throw DataError("physics JSON: unknown key '" + it.key() + "'");
  }
  try {
    if (j.contains("tau_mean")) config.tau_mean = j["tau_mean"].get<double>();
    if (j.contains("sigma_mfg")) config.sigma_mfg = j["sigma_mfg"].get<double>();
    if (j.contains("sigma_noise")) config.sigma_noise = j["sigma_noise"].get<double>();
    if (j.contains("chaos_rate")) config.chaos_rate = j["chaos_rate"].get<double>();
    if (j.contains("pulse_filter_width")) {
      config.pulse_filter_width = j["pulse_filter_width"].get<double>();
    }
    if (j.contains("m_stages")) config.m_stages = j["m_stages"].get<std::uint32_t>();
    if (j.contains("hold_cycles")) config.hold_cycles = j["hold_cycles"].get<std::uint32_t>();
    if (j.contains("alpha_net")) config.alpha_net = j["alpha_net"].get<double>();
    if (j.contains("alpha_dl")) config.alpha_dl = j["alpha_dl"].get<double>();
    if (j.contains("t_ref")) config.t_ref = j["t_ref"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("physics JSON: ") + e.what());
  }
  config.validate();
  return config;
}

void save_physics(const PhysicsConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << physics_to_json(config);
  if (!out) throw DataError("write failed: " + path);
}

PhysicsConfig load_physics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return physics_from_json(ss.str());
}

ChipInstance sample_chip(const NetworkTopology& topology, const PhysicsConfig& config,
                         std::uint64_t chip_seed, std::uint32_t chip_id) {
  validate_topology(topology);
  config.validate();

  ChipInstance chip;
  chip.chip_id = chip_id;
  chip.chip_seed = chip_seed;
  chip.topology = topology;

  SplitMix64 rng(derive_seed({kChipDelayTag, chip_seed, topology.seed, topology.n_nodes}));
  const double nominal = config.gate_delay();
  auto draw = [&]() {
    if (config.sigma_mfg == 0.0) return nominal;
    return nominal * std::max(kVariationFloor, rng.normal(1.0, config.sigma_mfg));
  };

  chip.edge_delay.resize(topology.n_nodes);
  for (std::uint32_t i = 0; i < topology.n_nodes; ++i) {
    for (int k = 0; k < 3; ++k) chip.edge_delay[i][k] = draw();
  }
  chip.readout_delay.resize(config.m_stages);
  for (std::uint32_t m = 0; m < config.m_stages; ++m) chip.readout_delay[m] = draw();
  return chip;
}

TemperatureScale temperature_scale(const PhysicsConfig& config, double temperature_c) {
  if (!(temperature_c >= kTempMinC && temperature_c <= kTempMaxC)) {
    throw ConfigError("temperature " + std::to_string(temperature_c) +
                      " C outside supported range [-40, 60]");
  }
  TemperatureScale s;
  s.network = scale_at(config.alpha_net, temperature_c, config.t_ref);
  s.readout = scale_at(config.alpha_dl, temperature_c, config.t_ref);
  return s;
}

ScaledDelays effective_delays(const ChipInstance& chip, const PhysicsConfig& config,
                              double temperature_c) {
  const TemperatureScale s = temperature_scale(config, temperature_c);
  ScaledDelays out;
  out.edge_delay.resize(chip.edge_delay.size());
  for (std::size_t i = 0; i < chip.edge_delay.size(); ++i) {
    for (int k = 0; k < 3; ++k) out.edge_delay[i][k] = chip.edge_delay[i][k] * s.network;
  }
  out.readout_delay.resize(chip.readout_delay.size());
  out.capture_times.resize(chip.readout_delay.size());
  double cum = 0.0;
  for (std::size_t m = 0; m < chip.readout_delay.size(); ++m) {
    out.readout_delay[m] = chip.readout_delay[m] * s.readout;
    cum += out.readout_delay[m];
    out.capture_times[m] = cum;
  }
  return out;
}

}  // namespace hbnpuf
