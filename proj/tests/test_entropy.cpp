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

#include <cmath>

#include "fixtures.hpp"
#include "hbnpuf/entropy.hpp"
#include "hbnpuf/errors.hpp"
#include "oracles.hpp"

using namespace hbnpuf;

namespace {

CRPDataset exhaustive_dataset(std::uint32_t n, std::uint32_t chips, std::uint32_t repeats) {
  NetworkTopology topo = generate_topology(n, 50 + n, false);
  PhysicsConfig config;
  config.m_stages = 6;
  QueryProtocol protocol;
  protocol.mode = ChallengeMode::kExhaustive;
  protocol.n_challenges = (1u << n) - 2;
  protocol.n_repeats = repeats;
  std::vector<std::uint64_t> seeds(chips);
  for (std::uint32_t p = 0; p < chips; ++p) seeds[p] = 700 + p;
  return collect(topo, config, seeds, protocol);
}

BitMatrix matrix_from_rows(const std::vector<std::vector<int>>& rows) {
  BitMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.set(r, c, rows[r][c] != 0);
  }
  return m;
}

}  // namespace

TEST_CASE("bit matrix column counts follow N * N_vc") {
  // N=3 cannot host a 3-input no-self network, but the ordering arithmetic
  // still gives 3 * 6 = 18 columns for its challenge table.
  CHECK(enumerate_valid_challenges(3).size() * 3 == 18);
  CRPDataset four = exhaustive_dataset(4, 2, 1);
  CHECK(build_bit_matrix(four, 0).n_cols() == 56);
  CRPDataset five = exhaustive_dataset(5, 2, 1);
  CHECK(build_bit_matrix(five, 0).n_cols() == 150);
}

TEST_CASE("bit matrix column (j, i) maps challenge j, node i") {
  // Craft a dataset where chip 0 answers challenge "0100" with only node 2
  // set, then check that exactly column j*N + 2 carries it.
  DatasetManifest manifest;
  manifest.topology = generate_topology(4, 3, false);
  manifest.physics.m_stages = 1;
  manifest.protocol.mode = ChallengeMode::kExhaustive;
  manifest.protocol.n_challenges = 14;
  manifest.protocol.n_repeats = 1;
  manifest.chip_seeds = {1, 2};
  manifest.has_trivial = false;
  CRPDataset ds(manifest);
  std::uint32_t j_target = 0;
  for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
    if (ds.challenges()[c].to_string() == "0100") j_target = c;
  }
  BitVec response(4);
  response.set(2, true);
  ds.store_response(0, 0, j_target, 0, 0, response);
  const BitMatrix matrix = build_bit_matrix(ds, 0, RepeatVote::kFirst);
  CHECK(matrix.get(0, j_target * 4 + 2));
  CHECK_FALSE(matrix.get(0, j_target * 4 + 1));
  CHECK_FALSE(matrix.get(1, j_target * 4 + 2));
}

TEST_CASE("majority vote smooths repeats") {
  CRPDataset ds = fixtures::synthetic_dataset(4, 1, 2, 5, 1,
                                              [](auto, auto, auto c, auto r, auto) {
                                                BitVec v(4);
                                                // bit 0: set in 3 of 5 repeats
                                                v.set(0, c == 0 && r < 3);
                                                return v;
                                              });
  const BitMatrix majority = build_bit_matrix(ds, 0, RepeatVote::kMajority);
  CHECK(majority.get(0, 0));
  const BitMatrix first = build_bit_matrix(ds, 0, RepeatVote::kFirst);
  CHECK(first.get(0, 0));
}

TEST_CASE("h_min matches hand values") {
  // 4 rows: column 0 balanced (1 bit), column 1 constant (0 bits),
  // column 2 at 3/4 (-log2(0.75)).
  BitMatrix m = matrix_from_rows({{1, 0, 1, 1},
                                  {1, 0, 1, 0},
                                  {0, 0, 1, 1},
                                  {0, 0, 0, 0}});
  const HMinResult result = h_min(m, 2);  // N=2, two "challenges"
  const double expected = 1.0 + 0.0 + (-std::log2(0.75)) + 1.0;
  CHECK(result.h_min_bits == doctest::Approx(expected));
  CHECK(result.rho_min == doctest::Approx(expected / 4.0));
}

TEST_CASE("h_min is invariant under row permutation") {
  SplitMix64 rng(4);
  BitMatrix m(8, 30);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 30; ++c) m.set(r, c, rng.next() & 1u);
  }
  BitMatrix shuffled(8, 30);
  const std::size_t perm[] = {3, 1, 7, 0, 5, 2, 6, 4};
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 30; ++c) shuffled.set(r, c, m.get(perm[r], c));
  }
  CHECK(h_min(m, 3).h_min_bits == doctest::Approx(h_min(shuffled, 3).h_min_bits));
}

TEST_CASE("sampled h_min extrapolates by the uncovered fraction") {
  // 10 of the 14 valid challenges for N=4 covered: scale = 14/10.
  BitMatrix m(4, 40);
  SplitMix64 rng(9);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 40; ++c) m.set(r, c, rng.next() & 1u);
  }
  const HMinResult result = h_min(m, 4);
  CHECK(result.extrapolated);
  double direct = 0.0;
  for (std::size_t c = 0; c < 40; ++c) {
    const double ones = static_cast<double>(m.column_ones(c));
    direct += -std::log2(std::max(ones, 4.0 - ones) / 4.0);
  }
  CHECK(std::exp2(result.h_min_bits_log2) == doctest::Approx(direct * 14.0 / 10.0));
  CHECK(result.rho_min == doctest::Approx(direct / 40.0));
}

TEST_CASE("mutual information matches the brute-force oracle") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    BitMatrix m(8, 20);
    std::vector<std::vector<int>> cols(20, std::vector<int>(8));
    for (std::size_t r = 0; r < 8; ++r) {
      for (std::size_t c = 0; c < 20; ++c) {
        const bool bit = rng.next() & 1u;
        m.set(r, c, bit);
        cols[c][r] = bit;
      }
    }
    const auto mi = mutual_information_matrix(m);
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(mi[i * 20 + i] == 0.0);
      for (std::size_t j = i + 1; j < 20; ++j) {
        const double expected = oracle::mutual_information_bruteforce(cols[i], cols[j]);
        CHECK(std::abs(mi[i * 20 + j] - expected) < 1e-12);
        CHECK(mi[i * 20 + j] == mi[j * 20 + i]);
        CHECK(mi[i * 20 + j] > -1e-12);
      }
    }
  }
}

TEST_CASE("duplicated fair column carries exactly one bit of information") {
  BitMatrix m = matrix_from_rows({{1, 1}, {0, 0}, {1, 1}, {0, 0}});
  const auto mi = mutual_information_matrix(m);
  CHECK(mi[1] == doctest::Approx(1.0));
}

TEST_CASE("column cap raises an infeasibility error") {
  BitMatrix m(4, 64);
  CHECK_THROWS_AS(mutual_information_matrix(m, 32), InfeasibleError);
}

TEST_CASE("2-opt reaches local optimality and respects determinism") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + trial % 12;
    std::vector<double> mi(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        mi[i * n + j] = mi[j * n + i] = rng.uniform01();
      }
    }
    const auto order = order_2opt(mi, n, 4, 11);
    CHECK_FALSE(has_improving_2opt_move(mi, n, order));
    CHECK(order == order_2opt(mi, n, 4, 11));
    // Never worse than the un-permuted chain.
    std::vector<std::uint32_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = static_cast<std::uint32_t>(i);
    CHECK(chain_penalty(mi, n, order) >= chain_penalty(mi, n, identity) - 1e-12);
  }
}

TEST_CASE("2-opt puts a strongly correlated pair adjacent") {
  // Bits 1 and 3 duplicate each other; everything else is independent noise.
  const std::size_t n = 4;
  std::vector<double> mi(n * n, 0.0);
  mi[1 * n + 3] = mi[3 * n + 1] = 1.0;
  mi[0 * n + 1] = mi[1 * n + 0] = 0.05;
  mi[2 * n + 3] = mi[3 * n + 2] = 0.03;
  const auto order = order_2opt(mi, n, 8, 5);
  std::size_t pos1 = 0, pos3 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] == 1) pos1 = i;
    if (order[i] == 3) pos3 = i;
  }
  CHECK((pos1 > pos3 ? pos1 - pos3 : pos3 - pos1) == 1);
  // And the exhaustive optimum confirms it.
  std::vector<std::uint32_t> best;
  const double optimum = oracle::best_chain_penalty_exhaustive(mi, n, &best);
  CHECK(chain_penalty(mi, n, order) == doctest::Approx(optimum));
}

TEST_CASE("2-opt vs exhaustive optimum on small instances (reported, not gated)") {
  SplitMix64 rng(77);
  int matches = 0;
  const int trials = 40;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 5 + trial % 4;  // 5..8 bits
    std::vector<double> mi(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        mi[i * n + j] = mi[j * n + i] = rng.uniform01();
      }
    }
    const auto order = order_2opt(mi, n, 8, trial);
    const double got = chain_penalty(mi, n, order);
    const double optimum = oracle::best_chain_penalty_exhaustive(mi, n);
    CHECK(got <= optimum + 1e-9);
    if (got >= optimum - 1e-9) ++matches;
  }
  MESSAGE("2-opt matched the exhaustive optimum in ", matches, "/", trials, " trials");
  CHECK(matches > 0);
}

TEST_CASE("independent columns give H_joint equal to H_min") {
  // One balanced independent pattern per column over 4 rows: columns are the
  // 4-row truth table columns with zero pairwise MI.
  BitMatrix m = matrix_from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const HJointResult joint = h_joint(m, 1);
  const HMinResult base = h_min(m, 1);
  CHECK(joint.penalty_bits == doctest::Approx(0.0));
  CHECK(joint.h_joint_bits == doctest::Approx(base.h_min_bits));
}

TEST_CASE("duplicated columns cost at least one bit per fair pair") {
  BitMatrix m = matrix_from_rows({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}});
  const HJointResult joint = h_joint(m, 2);
  CHECK(joint.penalty_bits >= 2.0 - 1e-9);  // two duplicated fair pairs
  const HMinResult base = h_min(m, 2);
  CHECK(joint.h_joint_bits <= base.h_min_bits + 1e-12);
}

TEST_CASE("H_joint never exceeds H_min on random matrices") {
  SplitMix64 rng(3133);
  for (int trial = 0; trial < 25; ++trial) {
    BitMatrix m(6, 12);
    for (std::size_t r = 0; r < 6; ++r) {
      for (std::size_t c = 0; c < 12; ++c) m.set(r, c, rng.next() & 1u);
    }
    const HJointResult joint = h_joint(m, 2, 2, trial);
    CHECK(joint.h_joint_bits <= h_min(m, 2).h_min_bits + 1e-12);
  }
}

TEST_CASE("entropy pipeline runs on exhaustive simulated data") {
  CRPDataset ds = exhaustive_dataset(5, 8, 3);
  const BitMatrix matrix = build_bit_matrix(ds, 2);
  const HMinResult base = h_min(matrix, 5);
  CHECK_FALSE(base.extrapolated);
  CHECK(base.rho_min > 0.0);
  CHECK(base.rho_min <= 1.0);
  const HJointResult joint = h_joint(matrix, 5);
  CHECK(joint.h_joint_bits <= base.h_min_bits + 1e-12);
}
