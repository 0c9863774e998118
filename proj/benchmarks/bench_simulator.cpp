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

#include <benchmark/benchmark.h>

#include "hbnpuf/rng.hpp"
#include "hbnpuf/simulator.hpp"

namespace {

using namespace hbnpuf;

void bm_run_transient(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NetworkTopology topology = generate_topology(n, 42, false);
  const PhysicsConfig config;
  const ChipInstance chip = sample_chip(topology, config, 1);
  TransientEngine engine(chip, config);
  SplitMix64 rng(7);
  BitVec challenge(n);
  for (std::uint32_t i = 0; i < n; ++i) challenge.set(i, rng.next() & 1u);

  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    const Bitstream bs = engine.run(challenge, seed++);
    events += engine.last_event_count();
    benchmark::DoNotOptimize(bs.states.back());
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(bm_run_transient)->Arg(16)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void bm_sample_chip(benchmark::State& state) {
  const NetworkTopology topology =
      generate_topology(static_cast<std::uint32_t>(state.range(0)), 42, false);
  const PhysicsConfig config;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const ChipInstance chip = sample_chip(topology, config, seed++);
    benchmark::DoNotOptimize(chip.readout_delay.back());
  }
}
BENCHMARK(bm_sample_chip)->Arg(64)->Arg(1024)->Unit(benchmark::kMicrosecond);

}  // namespace
