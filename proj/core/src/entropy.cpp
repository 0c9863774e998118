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

#include "hbnpuf/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/rng.hpp"

namespace hbnpuf {

namespace {

constexpr std::uint64_t kTwoOptTag = 0x74776f2d6f707421ULL;

double xlog2x_ratio(double joint, double px, double py) {
  // p * log2(p / (px*py)) with the 0*log(0) = 0 convention.
  if (joint <= 0.0) return 0.0;
  return joint * std::log2(joint / (px * py));
}

}  // namespace

BitMatrix::BitMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), words_((n_rows * n_cols + 63) / 64, 0) {
  if (n_rows == 0 || n_cols == 0) throw DataError("BitMatrix: empty dimensions");
}

std::uint64_t BitMatrix::column_mask(std::size_t col) const {
  if (n_rows_ > 64) throw InfeasibleError("BitMatrix::column_mask: more than 64 rows");
  std::uint64_t mask = 0;
  for (std::size_t r = 0; r < n_rows_; ++r) {
    mask |= static_cast<std::uint64_t>(get(r, col)) << r;
  }
  return mask;
}

std::size_t BitMatrix::column_ones(std::size_t col) const {
  std::size_t ones = 0;
  for (std::size_t r = 0; r < n_rows_; ++r) ones += get(r, col);
  return ones;
}

BitMatrix build_bit_matrix(const CRPDataset& ds, std::uint32_t stage, RepeatVote vote,
                           std::uint32_t temp_index) {
  if (stage >= ds.n_stages()) throw DataError("build_bit_matrix: stage out of range");
  if (temp_index >= ds.n_temps()) throw DataError("build_bit_matrix: temp index out of range");
  const std::uint32_t n = ds.n_nodes();
  const std::uint32_t repeats = ds.n_repeats();
  BitMatrix matrix(ds.n_chips(), static_cast<std::size_t>(ds.n_challenges()) * n);

  for (std::uint32_t p = 0; p < ds.n_chips(); ++p) {
    for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
      const std::size_t base = static_cast<std::size_t>(c) * n;
      if (vote == RepeatVote::kFirst || repeats == 1) {
        const std::uint8_t* cell = ds.cell(temp_index, p, c, 0, stage);
        for (std::uint32_t i = 0; i < n; ++i) {
          matrix.set(p, base + i, (cell[i >> 3] >> (i & 7)) & 1u);
        }
      } else {
        for (std::uint32_t i = 0; i < n; ++i) {
          std::uint32_t ones = 0;
          for (std::uint32_t r = 0; r < repeats; ++r) {
            const std::uint8_t* cell = ds.cell(temp_index, p, c, r, stage);
            ones += (cell[i >> 3] >> (i & 7)) & 1u;
          }
          matrix.set(p, base + i, 2 * ones > repeats);
        }
      }
    }
  }
  return matrix;
}

double log2_valid_challenge_count(std::uint32_t n) {
  // log2(2^n - 2) = n + log2(1 - 2^(1-n))
  return static_cast<double>(n) + std::log2(1.0 - std::ldexp(1.0, 1 - static_cast<int>(n)));
}

HMinResult h_min(const BitMatrix& matrix, std::uint32_t n_nodes) {
  if (matrix.n_cols() % n_nodes != 0) {
    throw DataError("h_min: column count is not a multiple of N");
  }
  const double rows = static_cast<double>(matrix.n_rows());
  double bits = 0.0;
  for (std::size_t col = 0; col < matrix.n_cols(); ++col) {
    const double ones = static_cast<double>(matrix.column_ones(col));
    const double p_max = std::max(ones, rows - ones) / rows;
    bits += -std::log2(p_max);
  }

  const double covered = static_cast<double>(matrix.n_cols()) / n_nodes;
  const double log2_nvc = log2_valid_challenge_count(n_nodes);
  const double log2_covered = std::log2(covered);

  HMinResult result;
  result.extrapolated = log2_covered < log2_nvc - 1e-9;
  // Sampled runs scale up by the uncovered fraction of the challenge space.
  result.h_min_bits_log2 = std::log2(std::max(bits, 1e-300)) + (log2_nvc - log2_covered);
  result.h_min_bits = bits <= 0.0 ? 0.0 : std::exp2(result.h_min_bits_log2);
  result.rho_min = bits / (covered * n_nodes);
  if (bits <= 0.0) result.h_min_bits_log2 = -std::numeric_limits<double>::infinity();
  return result;
}

std::vector<double> mutual_information_matrix(const BitMatrix& matrix, std::size_t max_cols) {
  const std::size_t n = matrix.n_cols();
  if (n > max_cols) {
    throw InfeasibleError("mutual_information_matrix: " + std::to_string(n) +
                          " columns exceeds the cap of " + std::to_string(max_cols) +
                          "; joint entropy infeasible");
  }
  if (matrix.n_rows() > 64) {
    throw InfeasibleError("mutual_information_matrix: more than 64 rows unsupported");
  }
  const double rows = static_cast<double>(matrix.n_rows());

  std::vector<std::uint64_t> cols(n);
  std::vector<double> p1(n);
  for (std::size_t i = 0; i < n; ++i) {
    cols[i] = matrix.column_mask(i);
    p1[i] = static_cast<double>(std::popcount(cols[i])) / rows;
  }

  std::vector<double> mi(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double n11 = static_cast<double>(std::popcount(cols[i] & cols[j]));
      const double n1 = static_cast<double>(std::popcount(cols[i]));
      const double n2 = static_cast<double>(std::popcount(cols[j]));
      const double p11 = n11 / rows;
      const double p10 = (n1 - n11) / rows;
      const double p01 = (n2 - n11) / rows;
      const double p00 = 1.0 - p11 - p10 - p01;
      double value = 0.0;
      value += xlog2x_ratio(p00, 1.0 - p1[i], 1.0 - p1[j]);
      value += xlog2x_ratio(p01, 1.0 - p1[i], p1[j]);
      value += xlog2x_ratio(p10, p1[i], 1.0 - p1[j]);
      value += xlog2x_ratio(p11, p1[i], p1[j]);
      mi[i * n + j] = value;
      mi[j * n + i] = value;
    }
  }
  return mi;
}

double chain_penalty(const std::vector<double>& mi, std::size_t n_cols,
                     const std::vector<std::uint32_t>& order) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    total += mi[static_cast<std::size_t>(order[i]) * n_cols + order[i + 1]];
  }
  return total;
}

namespace {

// Gain of reversing order[i..j] in the chain objective. Internal edges keep
// their weight (the matrix is symmetric); only the two boundary edges change.
double move_gain(const std::vector<double>& mi, std::size_t n,
                 const std::vector<std::uint32_t>& order, std::size_t i, std::size_t j) {
  double gain = 0.0;
  if (i > 0) {
    gain += mi[static_cast<std::size_t>(order[i - 1]) * n + order[j]] -
            mi[static_cast<std::size_t>(order[i - 1]) * n + order[i]];
  }
  if (j + 1 < order.size()) {
    gain += mi[static_cast<std::size_t>(order[i]) * n + order[j + 1]] -
            mi[static_cast<std::size_t>(order[j]) * n + order[j + 1]];
  }
  return gain;
}

void two_opt_refine(const std::vector<double>& mi, std::size_t n,
                    std::vector<std::uint32_t>& order) {
  const std::size_t len = order.size();
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = i + 1; j < len; ++j) {
        if (i == 0 && j == len - 1) continue;  // full reversal changes nothing
        if (move_gain(mi, n, order, i, j) > 1e-12) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i),
                       order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
}

}  // namespace

bool has_improving_2opt_move(const std::vector<double>& mi, std::size_t n_cols,
                             const std::vector<std::uint32_t>& order, double eps) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (i == 0 && j == order.size() - 1) continue;
      if (move_gain(mi, n_cols, order, i, j) > eps) return true;
    }
  }
  return false;
}

std::vector<std::uint32_t> order_2opt(const std::vector<double>& mi, std::size_t n_cols,
                                      std::uint32_t restarts, std::uint64_t seed) {
  if (n_cols == 0 || mi.size() != n_cols * n_cols) {
    throw DataError("order_2opt: matrix size mismatch");
  }
  if (restarts == 0) restarts = 1;

  std::vector<std::uint32_t> best;
  double best_penalty = -1.0;
  for (std::uint32_t s = 0; s < restarts; ++s) {
    std::vector<std::uint32_t> order(n_cols);
    for (std::size_t i = 0; i < n_cols; ++i) order[i] = static_cast<std::uint32_t>(i);
    SplitMix64 rng(derive_seed({kTwoOptTag, seed, s}));
    if (s > 0) shuffle(order.data(), order.size(), rng);  // restart 0 is the identity
    two_opt_refine(mi, n_cols, order);
    const double penalty = chain_penalty(mi, n_cols, order);
    if (penalty > best_penalty) {
      best_penalty = penalty;
      best = std::move(order);
    }
  }
  return best;
}

HJointResult h_joint(const BitMatrix& matrix, std::uint32_t n_nodes, std::uint32_t restarts,
                     std::uint64_t seed) {
  const HMinResult base = h_min(matrix, n_nodes);
  const std::vector<double> mi = mutual_information_matrix(matrix);
  HJointResult result;
  result.order = order_2opt(mi, matrix.n_cols(), restarts, seed);
  result.penalty_bits = chain_penalty(mi, matrix.n_cols(), result.order);
  result.h_joint_bits = base.h_min_bits - result.penalty_bits;
  result.rho_joint = result.h_joint_bits / (static_cast<double>(matrix.n_cols()));
  return result;
}

void write_entropy_csv(const std::string& path, const std::vector<EntropyReportRow>& rows,
                       std::uint64_t input_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(input_hash));
  out << "# input_hash=" << hex << "\n";
  out << "n,class_id,h_min_bits_log2,rho_min,h_joint_bits,rho_joint,h_ctw_bits,mode\n";
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& row : rows) {
    out << row.n_nodes << ',' << row.class_id << ',' << fmt(row.h_min_bits_log2) << ','
        << fmt(row.rho_min) << ',';
    if (row.has_joint) out << fmt(row.h_joint_bits);
    out << ',';
    if (row.has_joint) out << fmt(row.rho_joint);
    out << ',';
    if (row.has_ctw) out << fmt(row.h_ctw_bits);
    out << ',' << row.mode << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace hbnpuf
