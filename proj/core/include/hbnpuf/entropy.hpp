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
#include <string>
#include <vector>

#include "hbnpuf/harness.hpp"

namespace hbnpuf {

// One row per chip, columns ordered x_{jN+i}: challenge j in lexicographic
// order of the dataset's challenge list, node i ascending within each
// challenge.
class BitMatrix {
 public:
  BitMatrix(std::size_t n_rows, std::size_t n_cols);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  bool get(std::size_t row, std::size_t col) const {
    const std::size_t b = row * n_cols_ + col;
    return (words_[b >> 6] >> (b & 63)) & 1u;
  }
  void set(std::size_t row, std::size_t col, bool value) {
    const std::size_t b = row * n_cols_ + col;
    const std::uint64_t bit = std::uint64_t{1} << (b & 63);
    if (value) {
      words_[b >> 6] |= bit;
    } else {
      words_[b >> 6] &= ~bit;
    }
  }

  /// Column as a row-indexed bit mask; only valid for n_rows <= 64.
  std::uint64_t column_mask(std::size_t col) const;

  /// Number of ones in a column.
  std::size_t column_ones(std::size_t col) const;

 private:
  std::size_t n_rows_, n_cols_;
  std::vector<std::uint64_t> words_;
};

enum class RepeatVote { kMajority, kFirst };

/// Per-chip response rows at one stage. kMajority votes each bit over
/// repeats (ties to 0); kFirst takes repeat 0.
BitMatrix build_bit_matrix(const CRPDataset& dataset, std::uint32_t stage,
                           RepeatVote vote = RepeatVote::kMajority, std::uint32_t temp_index = 0);

/// log2(2^n - 2), safe for large n.
double log2_valid_challenge_count(std::uint32_t n);

struct HMinResult {
  double h_min_bits;       // +inf-safe only for n_cols counted exactly; see log2 field
  double h_min_bits_log2;  // log2 of the (possibly extrapolated) bit count
  double rho_min;          // density against N * N_vc
  bool extrapolated;       // true when the matrix covers a challenge sample
};

/// Min entropy with the per-column most-likely-outcome estimate. When the
/// matrix covers fewer than all valid challenges, the total is scaled up by
/// the uncovered fraction and flagged as extrapolated.
HMinResult h_min(const BitMatrix& matrix, std::uint32_t n_nodes);

/// Pairwise plug-in mutual information between all columns, bits. Symmetric,
/// zeros on the diagonal, nonnegative up to rounding. Throws InfeasibleError
/// above max_cols.
std::vector<double> mutual_information_matrix(const BitMatrix& matrix,
                                              std::size_t max_cols = 4096);

/// Chain ordering approximately maximizing the sum of adjacent mutual
/// information: best of `restarts` random starts, each refined by 2-opt to
/// local optimality.
std::vector<std::uint32_t> order_2opt(const std::vector<double>& mi, std::size_t n_cols,
                                      std::uint32_t restarts, std::uint64_t seed);

/// Sum of adjacent MI along a chain ordering.
double chain_penalty(const std::vector<double>& mi, std::size_t n_cols,
                     const std::vector<std::uint32_t>& order);

/// True when some segment reversal strictly increases the chain penalty.
bool has_improving_2opt_move(const std::vector<double>& mi, std::size_t n_cols,
                             const std::vector<std::uint32_t>& order, double eps = 1e-12);

struct HJointResult {
  double h_joint_bits;
  double rho_joint;
  double penalty_bits;
  std::vector<std::uint32_t> order;
};

/// H_joint = H_min - max-chain MI penalty; <= H_min by construction.
HJointResult h_joint(const BitMatrix& matrix, std::uint32_t n_nodes, std::uint32_t restarts = 4,
                     std::uint64_t seed = 1);

/// Entropy CSV row; fields without a value stay empty in the file.
struct EntropyReportRow {
  std::uint32_t n_nodes = 0;
  std::string class_id;
  double h_min_bits_log2 = 0.0;
  double rho_min = 0.0;
  bool has_joint = false;
  double h_joint_bits = 0.0;
  double rho_joint = 0.0;
  bool has_ctw = false;
  double h_ctw_bits = 0.0;
  std::string mode;  // "exhaustive" or "sampled"
};
void write_entropy_csv(const std::string& path, const std::vector<EntropyReportRow>& rows,
                       std::uint64_t input_hash);

}  // namespace hbnpuf
