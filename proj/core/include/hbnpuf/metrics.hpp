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
#include <optional>
#include <string>
#include <vector>

#include "hbnpuf/harness.hpp"

namespace hbnpuf {

// hamming() and fractional_hamming() live in bitvec.hpp.

/// r(c): intra-device fractional Hamming distance per challenge, averaged
/// over all unordered repeat pairs r < r', then over chips. Needs >= 2
/// repeats.
std::vector<double> reliability_per_challenge(const CRPDataset& dataset, std::uint32_t stage,
                                              std::uint32_t temp_index = 0);

/// u(c): inter-device fractional Hamming distance per challenge, averaged
/// over unordered chip pairs p < p' at matched repeat, then over repeats.
/// Needs >= 2 chips.
std::vector<double> uniqueness_per_challenge(const CRPDataset& dataset, std::uint32_t stage,
                                             std::uint32_t temp_index = 0);

/// r_p(c) without the chip average: [chip][challenge].
std::vector<std::vector<double>> per_chip_reliability(const CRPDataset& dataset,
                                                      std::uint32_t stage,
                                                      std::uint32_t temp_index = 0);

struct MuCurves {
  std::vector<double> t_ns;        // nominal capture time per stored stage
  std::vector<double> mu_intra;    // challenge average of r(c)
  std::vector<double> mu_inter;    // challenge average of u(c)
  std::vector<double> delta_mu;    // mu_inter - mu_intra
  std::vector<double> mu_intra_sd, mu_intra_se;  // dispersion across challenges
  std::vector<double> mu_inter_sd, mu_inter_se;
  std::uint32_t t_opt_index = 0;   // stored-stage index attaining max delta_mu
  std::uint32_t t_opt_stage = 0;   // global 1-based stage number
  double t_opt_ns = 0.0;
};

/// Full mu_intra/mu_inter/delta_mu curves; t_opt is the earliest stage
/// attaining the maximum of delta_mu.
MuCurves mu_curves(const CRPDataset& dataset, std::uint32_t temp_index = 0);

struct HistogramRow {
  double bin_lo, bin_hi;
  std::uint64_t intra_count, inter_count;
};

/// Histograms of r(c) and u(c) at one stage, bin width 1/N over [0, 1].
std::vector<HistogramRow> mu_histogram(const CRPDataset& dataset, std::uint32_t stage,
                                       std::uint32_t temp_index = 0);

struct MuRefCurve {
  std::uint32_t stage_lo = 1;  // global stage number of the first entry
  std::vector<double> t_ns;
  std::vector<double> raw;     // mean fractional distance to the reference
  std::vector<double> masked;  // same with the helper mask applied (empty without mask)
};

/// Per-stage challenge-averaged fractional distance between query responses
/// and the majority-voted reference (enrollment) responses, averaged over
/// chips and repeats. Manifests must cover the same chips, challenges and
/// stages.
MuRefCurve mu_vs_reference(const CRPDataset& query, const CRPDataset& reference,
                           const HelperMask* mask = nullptr, std::uint32_t query_temp_index = 0,
                           std::uint32_t reference_temp_index = 0);

// Everything the analysis of one dataset produces: the curves, the optimal
// stage, per-challenge and per-chip tables at t_opt, and the histogram.
struct MetricsReport {
  MuCurves curves;
  std::vector<double> r_at_topt;
  std::vector<double> u_at_topt;
  std::vector<std::vector<double>> per_chip_r_at_topt;  // [chip][challenge]
  std::vector<HistogramRow> histogram;                  // at t_opt
};
MetricsReport metrics_report(const CRPDataset& dataset, std::uint32_t temp_index = 0);

/// CSV writers. Every file starts with a '# input_hash=...' comment line that
/// identifies the manifest the numbers came from.
void write_mu_curves_csv(const std::string& path, const MuCurves& curves,
                         std::uint64_t input_hash);
void write_per_challenge_csv(const std::string& path, const MetricsReport& report,
                             std::uint64_t input_hash);
void write_per_chip_csv(const std::string& path, const MetricsReport& report,
                        std::uint64_t input_hash);
void write_hist_csv(const std::string& path, const std::vector<HistogramRow>& rows,
                    std::uint64_t input_hash);
void write_mu_ref_csv(const std::string& path,
                      const std::vector<std::pair<double, MuRefCurve>>& curves_by_temp,
                      std::uint64_t input_hash);

}  // namespace hbnpuf
