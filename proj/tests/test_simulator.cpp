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
#include "hbnpuf/rng.hpp"
#include "hbnpuf/simulator.hpp"
#include "oracles.hpp"

using namespace hbnpuf;

namespace {

BitVec random_challenge(std::uint32_t n, SplitMix64& rng) {
  BitVec c(n);
  for (std::uint32_t i = 0; i < n; ++i) c.set(i, rng.next() & 1u);
  if (c.all_zero() || c.all_one()) c.flip(rng.next() % n);
  return c;
}

}  // namespace

TEST_CASE("all-zero and all-one challenges are absorbing") {
  const NetworkTopology topo = generate_topology(16, 3, false);
  const PhysicsConfig config;  // noise on
  const ChipInstance chip = sample_chip(topo, config, 11);
  TransientEngine engine(chip, config);
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    const Bitstream zero = engine.run(BitVec::zeros(16), seed);
    const Bitstream one = engine.run(BitVec::ones(16), seed);
    for (const BitVec& s : zero.states) CHECK(s.all_zero());
    for (const BitVec& s : one.states) CHECK(s.all_one());
  }
}

TEST_CASE("noiseless uniform network reproduces the synchronous update") {
  // sigma_mfg = sigma_noise = 0 and no pulse filter: snapshot k must equal
  // the k-step synchronous XOR image of the challenge.
  PhysicsConfig config;
  config.sigma_mfg = 0.0;
  config.sigma_noise = 0.0;
  config.pulse_filter_width = 0.0;
  config.m_stages = 8;

  SplitMix64 rng(2024);
  for (std::uint32_t n : {6u, 12u, 16u}) {
    const NetworkTopology topo = generate_topology(n, 100 + n, false);
    const ChipInstance chip = sample_chip(topo, config, 1);
    TransientEngine engine(chip, config);
    for (int trial = 0; trial < 25; ++trial) {
      const BitVec challenge = random_challenge(n, rng);
      const Bitstream bs = engine.run(challenge, 0);
      std::vector<int> state = oracle::to_ints(challenge);
      for (std::uint32_t k = 0; k < config.m_stages; ++k) {
        state = oracle::sync_step(topo, state);
        CHECK(oracle::equals(state, bs.states[k]));
      }
    }
  }
}

TEST_CASE("runs are deterministic and noise-seed sensitive") {
  const NetworkTopology topo = generate_topology(32, 8, false);
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(topo, config, 2);
  TransientEngine engine(chip, config);
  SplitMix64 rng(5);
  const BitVec challenge = random_challenge(32, rng);

  const Bitstream a = engine.run(challenge, 123);
  const Bitstream b = engine.run(challenge, 123);
  CHECK(a.states == b.states);
  CHECK(a.capture_times == b.capture_times);

  // A fresh engine must agree with a reused one.
  TransientEngine fresh(chip, config);
  CHECK(fresh.run(challenge, 123).states == a.states);

  // Different noise seeds eventually diverge somewhere in the transient.
  bool diverged = false;
  for (std::uint64_t seed = 200; seed < 210 && !diverged; ++seed) {
    diverged = engine.run(challenge, seed).states != a.states;
  }
  CHECK(diverged);
}

TEST_CASE("zero noise makes repeats identical regardless of seed") {
  PhysicsConfig config;
  config.sigma_noise = 0.0;
  const NetworkTopology topo = generate_topology(24, 9, false);
  const ChipInstance chip = sample_chip(topo, config, 3);
  TransientEngine engine(chip, config);
  SplitMix64 rng(6);
  const BitVec challenge = random_challenge(24, rng);
  const Bitstream a = engine.run(challenge, 1);
  const Bitstream b = engine.run(challenge, 99999);
  CHECK(a.states == b.states);
}

TEST_CASE("capture times are the cumulative scaled readout delays") {
  const NetworkTopology topo = generate_topology(8, 10, false);
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(topo, config, 4);
  TransientEngine engine(chip, config);
  const Bitstream bs = engine.run(BitVec::zeros(8), 0, 40.0);
  const ScaledDelays view = effective_delays(chip, config, 40.0);
  CHECK(bs.capture_times == view.capture_times);
  for (std::size_t m = 1; m < bs.capture_times.size(); ++m) {
    CHECK(bs.capture_times[m] > bs.capture_times[m - 1]);
  }
}

TEST_CASE("matched temperature coefficients leave noise-free bitstreams invariant") {
  PhysicsConfig config;
  config.sigma_noise = 0.0;
  config.alpha_dl = config.alpha_net;  // commensurate scaling
  const NetworkTopology topo = generate_topology(24, 12, false);
  const ChipInstance chip = sample_chip(topo, config, 5);
  TransientEngine engine(chip, config);
  SplitMix64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const BitVec challenge = random_challenge(24, rng);
    const Bitstream cold = engine.run(challenge, 0, -20.0);
    const Bitstream hot = engine.run(challenge, 0, 40.0);
    CHECK(cold.states == hot.states);
  }
}

TEST_CASE("mismatched delay-line coefficient shifts captures against the network") {
  PhysicsConfig config;
  config.sigma_noise = 0.0;  // isolate the systematic effect
  const NetworkTopology topo = generate_topology(64, 13, false);
  const ChipInstance chip = sample_chip(topo, config, 6);
  TransientEngine engine(chip, config);
  SplitMix64 rng(8);
  bool any_diff = false;
  for (int trial = 0; trial < 10 && !any_diff; ++trial) {
    const BitVec challenge = random_challenge(64, rng);
    any_diff = engine.run(challenge, 0, 20.0).states != engine.run(challenge, 0, -20.0).states;
  }
  CHECK(any_diff);
}

TEST_CASE("event budget exhaustion raises a descriptive error") {
  const NetworkTopology topo = generate_topology(32, 14, false);
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(topo, config, 7);
  TransientEngine engine(chip, config);
  SplitMix64 rng(9);
  const BitVec challenge = random_challenge(32, rng);
  RunLimits limits;
  limits.max_events = 10;
  try {
    engine.run(challenge, 0, 20.0, limits);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(std::string(e.what()).find("10") != std::string::npos);
  }
}

TEST_CASE("booleanize is the identity seam") {
  CHECK(booleanize(false) == false);
  CHECK(booleanize(true) == true);
  const NetworkTopology topo = generate_topology(8, 15, false);
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(topo, config, 8);
  const Bitstream bs = run_transient(chip, config, BitVec::ones(8), 0);
  for (const BitVec& s : bs.states) {
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(booleanize(s.get(i)) == s.get(i));
  }
}

TEST_CASE("challenge length mismatches are rejected") {
  const NetworkTopology topo = generate_topology(8, 16, false);
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(topo, config, 9);
  TransientEngine engine(chip, config);
  CHECK_THROWS_AS(engine.run(BitVec::zeros(9), 0), DataError);
}

TEST_CASE("nontrivial fixed points are absorbing too") {
  // n=12, seed=7 happens to have fixed points beyond all-zero/all-one.
  const NetworkTopology topo = generate_topology(12, 7, false);
  const auto fixed = find_fixed_points_bruteforce(topo);
  REQUIRE(fixed.size() > 2);
  const PhysicsConfig config;  // noise on: a held fixed point never fires events
  const ChipInstance chip = sample_chip(topo, config, 21);
  TransientEngine engine(chip, config);
  for (const BitVec& point : fixed) {
    const Bitstream bs = engine.run(point, 99);
    for (const BitVec& s : bs.states) CHECK(s == point);
  }
}
