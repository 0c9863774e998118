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

#include <doctest.h>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/physics.hpp"

using namespace hbnpuf;

namespace {
NetworkTopology small_topology() { return generate_topology(8, 21, false); }
}  // namespace

TEST_CASE("zero manufacturing variance gives exactly nominal delays") {
  PhysicsConfig config;
  config.sigma_mfg = 0.0;
  const ChipInstance chip = sample_chip(small_topology(), config, 77);
  for (const auto& e : chip.edge_delay) {
    for (double d : e) CHECK(d == 0.5);
  }
  for (double d : chip.readout_delay) CHECK(d == 0.5);  // one pair = 2*tau
  CHECK(chip.readout_delay.size() == config.m_stages);
}

TEST_CASE("different chip seeds freeze different delays") {
  const PhysicsConfig config;
  const NetworkTopology topo = small_topology();
  const ChipInstance a = sample_chip(topo, config, 1);
  const ChipInstance b = sample_chip(topo, config, 2);
  CHECK(a.edge_delay != b.edge_delay);
  CHECK(a.readout_delay != b.readout_delay);
}

TEST_CASE("chip sampling is bit-identical across calls") {
  const PhysicsConfig config;
  const NetworkTopology topo = small_topology();
  const ChipInstance a = sample_chip(topo, config, 5, 3);
  const ChipInstance b = sample_chip(topo, config, 5, 3);
  CHECK(a.edge_delay == b.edge_delay);
  CHECK(a.readout_delay == b.readout_delay);
  CHECK(a.chip_id == b.chip_id);
}

TEST_CASE("all delays are strictly positive") {
  PhysicsConfig config;
  config.sigma_mfg = 0.5;  // extreme spread exercises the floor
  const ChipInstance chip = sample_chip(small_topology(), config, 9);
  for (const auto& e : chip.edge_delay) {
    for (double d : e) CHECK(d >= 0.1 * config.gate_delay());
  }
}

TEST_CASE("temperature scaling is the identity at the reference point") {
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(small_topology(), config, 4);
  const ScaledDelays view = effective_delays(chip, config, 20.0);
  CHECK(view.edge_delay == chip.edge_delay);
  CHECK(view.readout_delay == chip.readout_delay);
  double cum = 0.0;
  for (std::size_t m = 0; m < view.readout_delay.size(); ++m) {
    cum += view.readout_delay[m];
    CHECK(view.capture_times[m] == cum);
    if (m > 0) CHECK(view.capture_times[m] > view.capture_times[m - 1]);
  }
}

TEST_CASE("temperature scaling is linear with the configured slope") {
  PhysicsConfig config;
  config.alpha_net = 0.001;
  const ChipInstance chip = sample_chip(small_topology(), config, 4);
  const ScaledDelays view = effective_delays(chip, config, 40.0);
  for (std::size_t i = 0; i < chip.edge_delay.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(view.edge_delay[i][k] == doctest::Approx(chip.edge_delay[i][k] * 1.02).epsilon(1e-12));
    }
  }
}

TEST_CASE("out-of-range temperatures are refused") {
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(small_topology(), config, 4);
  CHECK_THROWS_AS(effective_delays(chip, config, -41.0), ConfigError);
  CHECK_THROWS_AS(effective_delays(chip, config, 61.0), ConfigError);
  CHECK_NOTHROW(effective_delays(chip, config, -40.0));
  CHECK_NOTHROW(effective_delays(chip, config, 60.0));
}

TEST_CASE("physics config validation catches nonsense") {
  PhysicsConfig config;
  config.tau_mean = 0.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = PhysicsConfig{};
  config.sigma_mfg = -0.1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = PhysicsConfig{};
  config.m_stages = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = PhysicsConfig{};
  config.alpha_net = 0.5;  // delays go negative at -40 C
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("physics JSON rejects unknown keys and round-trips values") {
  PhysicsConfig config;
  config.sigma_noise = 2.5;
  config.m_stages = 16;
  const std::string json = physics_to_json(config);
  const PhysicsConfig back = physics_from_json(json);
  CHECK(back.sigma_noise == 2.5);
  CHECK(back.m_stages == 16);
  CHECK(physics_to_json(back) == json);

  CHECK_THROWS_AS(physics_from_json(R"({"tau_mean": 0.25, "sigma_mgf": 0.05})"), DataError);
  CHECK_NOTHROW(physics_from_json(R"({"tau_mean": 0.25})"));
}
