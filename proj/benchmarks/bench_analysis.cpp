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

#include "hbnpuf/ctw.hpp"
#include "hbnpuf/entropy.hpp"
#include "hbnpuf/metrics.hpp"
#include "hbnpuf/rng.hpp"

namespace {

using namespace hbnpuf;

const CRPDataset& bench_dataset() {
  static const CRPDataset dataset = [] {
    const NetworkTopology topology = generate_topology(64, 42, false);
    const PhysicsConfig config;
    QueryProtocol protocol;
    protocol.mode = ChallengeMode::kSampled;
    protocol.n_challenges = 40;
    protocol.n_repeats = 10;
    protocol.sample_seed = 7;
    return collect(topology, config, {1, 2, 3, 4, 5, 6, 7, 8}, protocol);
  }();
  return dataset;
}

void bm_hamming(benchmark::State& state) {
  SplitMix64 rng(3);
  BitVec a(1024), b(1024);
  for (std::size_t i = 0; i < 1024; ++i) {
    a.set(i, rng.next() & 1u);
    b.set(i, rng.next() & 1u);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamming(a, b));
  }
}
BENCHMARK(bm_hamming);

void bm_mu_curves(benchmark::State& state) {
  const CRPDataset& dataset = bench_dataset();
  for (auto _ : state) {
    const MuCurves curves = mu_curves(dataset);
    benchmark::DoNotOptimize(curves.t_opt_ns);
  }
}
BENCHMARK(bm_mu_curves)->Unit(benchmark::kMillisecond);

void bm_mutual_information(benchmark::State& state) {
  SplitMix64 rng(5);
  const std::size_t cols = static_cast<std::size_t>(state.range(0));
  BitMatrix matrix(8, cols);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < cols; ++c) matrix.set(r, c, rng.next() & 1u);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutual_information_matrix(matrix).back());
  }
}
BENCHMARK(bm_mutual_information)->Arg(240)->Arg(2032)->Unit(benchmark::kMillisecond);

void bm_ctw(benchmark::State& state) {
  SplitMix64 rng(9);
  std::vector<std::uint8_t> target(10000);
  for (auto& b : target) b = rng.next() & 1u;
  const auto depth = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctw_codeword_length({}, target, depth));
  }
}
BENCHMARK(bm_ctw)->Arg(4)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
