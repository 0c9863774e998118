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

#include "hbnpuf/ctw.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hbnpuf/entropy.hpp"
#include "hbnpuf/errors.hpp"

namespace hbnpuf {

namespace {

// Context tree node. Probabilities are kept in log2 domain: log_pe is the KT
// estimate of this node's symbol sequence, log_pw the weighted mixture over
// all subtree models.
struct CtwNode {
  double log_pe = 0.0;
  double log_pw = 0.0;
  std::uint32_t count[2] = {0, 0};
  std::int32_t child[2] = {-1, -1};
};

// log2(2^a + 2^b), stable.
double log2_add(double a, double b) {
  if (a < b) std::swap(a, b);
  return a + std::log2(1.0 + std::exp2(b - a));
}

class CtwTree {
 public:
  explicit CtwTree(std::uint32_t depth) : depth_(depth) { nodes_.emplace_back(); }

  /// Processes one symbol under the given context window (context[0] is the
  /// most recent previous bit). Returns the code cost of the symbol in bits:
  /// the decrease of the root's weighted log-probability.
  double update(const std::uint8_t* context, std::uint8_t symbol) {
    path_.clear();
    path_.push_back(0);
    for (std::uint32_t d = 0; d < depth_; ++d) {
      const std::uint8_t branch = context[d];
      const std::int32_t parent = path_.back();
      std::int32_t node = nodes_[parent].child[branch];
      if (node < 0) {
        node = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[parent].child[branch] = node;
      }
      path_.push_back(node);
    }

    const double root_before = nodes_[0].log_pw;
    // Update leaf to root: KT counts first, then reweight.
    for (std::size_t level = path_.size(); level-- > 0;) {
      CtwNode& node = nodes_[path_[level]];
      const double a = static_cast<double>(node.count[symbol]) + 0.5;
      const double total = static_cast<double>(node.count[0] + node.count[1]) + 1.0;
      node.log_pe += std::log2(a / total);
      ++node.count[symbol];
      if (level == path_.size() - 1) {
        node.log_pw = node.log_pe;  // leaf
      } else {
        const double c0 = node.child[0] >= 0 ? nodes_[node.child[0]].log_pw : 0.0;
        const double c1 = node.child[1] >= 0 ? nodes_[node.child[1]].log_pw : 0.0;
        node.log_pw = -1.0 + log2_add(node.log_pe, c0 + c1);
      }
    }
    return root_before - nodes_[0].log_pw;
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  std::uint32_t depth_;
  std::vector<CtwNode> nodes_;
  std::vector<std::int32_t> path_;
};

}  // namespace

std::uint64_t ctw_codeword_length(const std::vector<std::uint8_t>& context,
                                  const std::vector<std::uint8_t>& target, std::uint32_t depth,
                                  std::uint64_t node_budget) {
  if (target.empty()) throw DataError("ctw_codeword_length: empty target");
  if (static_cast<std::uint64_t>(depth) * target.size() > node_budget) {
    throw InfeasibleError("ctw_codeword_length: depth*target length " +
                          std::to_string(static_cast<std::uint64_t>(depth) * target.size()) +
                          " exceeds the memory budget " + std::to_string(node_budget));
  }

  // One combined pass; context symbols update counts at zero attributed cost.
  CtwTree tree(depth);
  std::vector<std::uint8_t> window(depth, 0);  // window[0] = most recent bit
  double code_bits = 0.0;

  auto feed = [&](const std::vector<std::uint8_t>& bits, bool coded) {
    for (std::uint8_t raw : bits) {
      const std::uint8_t symbol = raw & 1u;
      const double cost = tree.update(window.data(), symbol);
      if (coded) code_bits += cost;
      if (depth > 0) {
        for (std::uint32_t d = depth - 1; d > 0; --d) window[d] = window[d - 1];
        window[0] = symbol;
      }
    }
  };
  feed(context, false);
  feed(target, true);

  if (code_bits < 0.0) code_bits = 0.0;
  return static_cast<std::uint64_t>(std::ceil(code_bits - 1e-9));
}

std::uint64_t ctw_best_codeword_length(const std::vector<std::uint8_t>& context,
                                       const std::vector<std::uint8_t>& target,
                                       std::uint32_t depth_lo, std::uint32_t depth_hi,
                                       std::uint64_t node_budget) {
  if (depth_lo > depth_hi) throw ConfigError("ctw: depth_lo > depth_hi");
  std::uint64_t best = ~std::uint64_t{0};
  for (std::uint32_t d = depth_lo; d <= depth_hi; ++d) {
    best = std::min(best, ctw_codeword_length(context, target, d, node_budget));
  }
  return best;
}

CtwReport h_ctw(const CRPDataset& dataset, std::uint32_t stage, std::uint32_t depth_lo,
                std::uint32_t depth_hi, std::uint32_t temp_index) {
  if (dataset.n_chips() < 2) throw DataError("h_ctw: needs >= 2 chips");
  // Single-repeat rows; compression should see raw responses, not votes.
  const BitMatrix matrix = build_bit_matrix(dataset, stage, RepeatVote::kFirst, temp_index);
  const std::size_t row_len = matrix.n_cols();

  std::vector<std::vector<std::uint8_t>> rows(matrix.n_rows());
  for (std::size_t p = 0; p < matrix.n_rows(); ++p) {
    rows[p].resize(row_len);
    for (std::size_t c = 0; c < row_len; ++c) rows[p][c] = matrix.get(p, c) ? 1u : 0u;
  }

  CtwReport report;
  double total = 0.0;
  for (std::size_t holdout = 0; holdout < rows.size(); ++holdout) {
    std::vector<std::uint8_t> context;
    context.reserve(row_len * (rows.size() - 1));
    for (std::size_t p = 0; p < rows.size(); ++p) {
      if (p != holdout) context.insert(context.end(), rows[p].begin(), rows[p].end());
    }
    const std::uint64_t bits =
        ctw_best_codeword_length(context, rows[holdout], depth_lo, depth_hi);
    report.holdouts.push_back(CtwHoldout{static_cast<std::uint32_t>(holdout), bits});
    total += static_cast<double>(bits);
  }
  report.h_ctw_bits = total / static_cast<double>(rows.size());
  return report;
}

}  // namespace hbnpuf
