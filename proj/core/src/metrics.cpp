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

#include "hbnpuf/metrics.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "hbnpuf/errors.hpp"

namespace hbnpuf {

namespace {

// Cells keep their trailing bits zero, so byte-wise XOR popcount equals the
// Hamming distance.
std::uint64_t cell_hamming(const std::uint8_t* a, const std::uint8_t* b, std::size_t n_bytes) {
  std::uint64_t d = 0;
  std::size_t i = 0;
  for (; i + 8 <= n_bytes; i += 8) {
    std::uint64_t wa, wb;
    std::memcpy(&wa, a + i, 8);
    std::memcpy(&wb, b + i, 8);
    d += static_cast<std::uint64_t>(std::popcount(wa ^ wb));
  }
  for (; i < n_bytes; ++i) {
    d += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
  }
  return d;
}

void check_stage(const CRPDataset& ds, std::uint32_t stage, std::uint32_t temp_index) {
  if (stage >= ds.n_stages()) throw DataError("metrics: stage index out of range");
  if (temp_index >= ds.n_temps()) throw DataError("metrics: temperature index out of range");
}

void mean_sd_se(const std::vector<double>& values, double& mean, double& sd, double& se) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  se = sd / std::sqrt(n);
}

std::ofstream open_csv(const std::string& path, std::uint64_t input_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(input_hash));
  out << "# input_hash=" << hex << "\n";
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::vector<double> reliability_per_challenge(const CRPDataset& ds, std::uint32_t stage,
                                              std::uint32_t temp_index) {
  check_stage(ds, stage, temp_index);
  const std::uint32_t repeats = ds.n_repeats();
  if (repeats < 2) throw DataError("reliability_per_challenge: needs >= 2 repeats");
  const double pairs = 0.5 * repeats * (repeats - 1);
  const double norm = static_cast<double>(ds.n_nodes());
  const std::size_t nb = ds.cell_bytes();

  std::vector<double> r(ds.n_challenges(), 0.0);
  for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
    double chip_sum = 0.0;
    for (std::uint32_t p = 0; p < ds.n_chips(); ++p) {
      std::uint64_t dist = 0;
      for (std::uint32_t a = 0; a < repeats; ++a) {
        const std::uint8_t* cell_a = ds.cell(temp_index, p, c, a, stage);
        for (std::uint32_t b = a + 1; b < repeats; ++b) {
          dist += cell_hamming(cell_a, ds.cell(temp_index, p, c, b, stage), nb);
        }
      }
      chip_sum += static_cast<double>(dist) / (pairs * norm);
    }
    r[c] = chip_sum / static_cast<double>(ds.n_chips());
  }
  return r;
}

std::vector<double> uniqueness_per_challenge(const CRPDataset& ds, std::uint32_t stage,
                                             std::uint32_t temp_index) {
  check_stage(ds, stage, temp_index);
  const std::uint32_t chips = ds.n_chips();
  if (chips < 2) throw DataError("uniqueness_per_challenge: needs >= 2 chips");
  const double pairs = 0.5 * chips * (chips - 1);
  const double norm = static_cast<double>(ds.n_nodes());
  const std::size_t nb = ds.cell_bytes();

  std::vector<double> u(ds.n_challenges(), 0.0);
  for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
    double repeat_sum = 0.0;
    for (std::uint32_t r = 0; r < ds.n_repeats(); ++r) {
      std::uint64_t dist = 0;
      for (std::uint32_t p = 0; p < chips; ++p) {
        const std::uint8_t* cell_p = ds.cell(temp_index, p, c, r, stage);
        for (std::uint32_t q = p + 1; q < chips; ++q) {
          dist += cell_hamming(cell_p, ds.cell(temp_index, q, c, r, stage), nb);
        }
      }
      repeat_sum += static_cast<double>(dist) / (pairs * norm);
    }
    u[c] = repeat_sum / static_cast<double>(ds.n_repeats());
  }
  return u;
}

std::vector<std::vector<double>> per_chip_reliability(const CRPDataset& ds, std::uint32_t stage,
                                                      std::uint32_t temp_index) {
  check_stage(ds, stage, temp_index);
  const std::uint32_t repeats = ds.n_repeats();
  if (repeats < 2) throw DataError("per_chip_reliability: needs >= 2 repeats");
  const double pairs = 0.5 * repeats * (repeats - 1);
  const double norm = static_cast<double>(ds.n_nodes());
  const std::size_t nb = ds.cell_bytes();

  std::vector<std::vector<double>> table(ds.n_chips(),
                                         std::vector<double>(ds.n_challenges(), 0.0));
  for (std::uint32_t p = 0; p < ds.n_chips(); ++p) {
    for (std::uint32_t c = 0; c < ds.n_challenges(); ++c) {
      std::uint64_t dist = 0;
      for (std::uint32_t a = 0; a < repeats; ++a) {
        const std::uint8_t* cell_a = ds.cell(temp_index, p, c, a, stage);
        for (std::uint32_t b = a + 1; b < repeats; ++b) {
          dist += cell_hamming(cell_a, ds.cell(temp_index, p, c, b, stage), nb);
        }
      }
      table[p][c] = static_cast<double>(dist) / (pairs * norm);
    }
  }
  return table;
}

MuCurves mu_curves(const CRPDataset& ds, std::uint32_t temp_index) {
  MuCurves out;
  const std::uint32_t stages = ds.n_stages();
  out.t_ns.resize(stages);
  out.mu_intra.resize(stages);
  out.mu_inter.resize(stages);
  out.delta_mu.resize(stages);
  out.mu_intra_sd.resize(stages);
  out.mu_intra_se.resize(stages);
  out.mu_inter_sd.resize(stages);
  out.mu_inter_se.resize(stages);

  for (std::uint32_t m = 0; m < stages; ++m) {
    out.t_ns[m] = ds.stage_time_ns(m);
    const std::vector<double> r = reliability_per_challenge(ds, m, temp_index);
    const std::vector<double> u = uniqueness_per_challenge(ds, m, temp_index);
    mean_sd_se(r, out.mu_intra[m], out.mu_intra_sd[m], out.mu_intra_se[m]);
    mean_sd_se(u, out.mu_inter[m], out.mu_inter_sd[m], out.mu_inter_se[m]);
    out.delta_mu[m] = out.mu_inter[m] - out.mu_intra[m];
  }
  // Earliest stage attaining the maximum; at equal delta_mu earlier capture
  // has strictly lower error.
  std::uint32_t best = 0;
  for (std::uint32_t m = 1; m < stages; ++m) {
    if (out.delta_mu[m] > out.delta_mu[best]) best = m;
  }
  out.t_opt_index = best;
  out.t_opt_stage = ds.stage_number(best);
  out.t_opt_ns = out.t_ns[best];
  return out;
}

std::vector<HistogramRow> mu_histogram(const CRPDataset& ds, std::uint32_t stage,
                                       std::uint32_t temp_index) {
  const std::vector<double> r = reliability_per_challenge(ds, stage, temp_index);
  const std::vector<double> u = uniqueness_per_challenge(ds, stage, temp_index);
  const std::uint32_t n = ds.n_nodes();  // bin width 1/N, one bit of distance
  std::vector<HistogramRow> rows(n);
  for (std::uint32_t b = 0; b < n; ++b) {
    rows[b].bin_lo = static_cast<double>(b) / n;
    rows[b].bin_hi = static_cast<double>(b + 1) / n;
    rows[b].intra_count = 0;
    rows[b].inter_count = 0;
  }
  auto bin_of = [&](double v) {
    auto b = static_cast<std::uint32_t>(v * n);
    return b >= n ? n - 1 : b;  // d = 1.0 lands in the last bin
  };
  for (double v : r) ++rows[bin_of(v)].intra_count;
  for (double v : u) ++rows[bin_of(v)].inter_count;
  return rows;
}

MuRefCurve mu_vs_reference(const CRPDataset& query, const CRPDataset& reference,
                           const HelperMask* mask, std::uint32_t query_temp_index,
                           std::uint32_t reference_temp_index) {
  if (query.manifest().topology != reference.manifest().topology ||
      query.manifest().chip_seeds != reference.manifest().chip_seeds ||
      query.challenges() != reference.challenges() ||
      query.manifest().protocol.stage_lo != reference.manifest().protocol.stage_lo ||
      query.n_stages() != reference.n_stages()) {
    throw DataError("mu_vs_reference: mismatched manifests (chips/challenges/stages differ)");
  }
  if (query_temp_index >= query.n_temps() || reference_temp_index >= reference.n_temps()) {
    throw DataError("mu_vs_reference: temperature index out of range");
  }
  if (mask != nullptr &&
      (mask->n_chips() != query.n_chips() || mask->n_challenges() != query.n_challenges() ||
       mask->n_stages() != query.n_stages() || mask->n_nodes() != query.n_nodes())) {
    throw DataError("mu_vs_reference: helper mask dimensions do not match the dataset");
  }

  const std::uint32_t n = query.n_nodes();
  const std::uint32_t ref_repeats = reference.n_repeats();
  MuRefCurve out;
  out.stage_lo = query.manifest().protocol.stage_lo;
  out.t_ns.resize(query.n_stages());
  out.raw.assign(query.n_stages(), 0.0);
  if (mask != nullptr) out.masked.assign(query.n_stages(), 0.0);

  std::vector<std::uint32_t> ones(n);
  for (std::uint32_t m = 0; m < query.n_stages(); ++m) {
    out.t_ns[m] = query.stage_time_ns(m);
    double raw_sum = 0.0, masked_sum = 0.0;
    std::uint64_t count = 0;
    for (std::uint32_t p = 0; p < query.n_chips(); ++p) {
      for (std::uint32_t c = 0; c < query.n_challenges(); ++c) {
        // Majority vote over enrollment repeats defines the enrolled response.
        std::fill(ones.begin(), ones.end(), 0);
        for (std::uint32_t r = 0; r < ref_repeats; ++r) {
          const std::uint8_t* cell = reference.cell(reference_temp_index, p, c, r, m);
          for (std::uint32_t i = 0; i < n; ++i) ones[i] += (cell[i >> 3] >> (i & 7)) & 1u;
        }
        BitVec ref_state(n);
        for (std::uint32_t i = 0; i < n; ++i) ref_state.set(i, 2 * ones[i] > ref_repeats);
        BitVec keep;
        if (mask != nullptr) keep = mask->mask(p, c, m);
        for (std::uint32_t r = 0; r < query.n_repeats(); ++r) {
          const BitVec q = query.response(query_temp_index, p, c, r, m);
          raw_sum += fractional_hamming(q, ref_state);
          if (mask != nullptr) masked_sum += masked_fractional_hamming(q, ref_state, keep);
          ++count;
        }
      }
    }
    out.raw[m] = raw_sum / static_cast<double>(count);
    if (mask != nullptr) out.masked[m] = masked_sum / static_cast<double>(count);
  }
  return out;
}

MetricsReport metrics_report(const CRPDataset& ds, std::uint32_t temp_index) {
  MetricsReport report;
  report.curves = mu_curves(ds, temp_index);
  const std::uint32_t stage = report.curves.t_opt_index;
  report.r_at_topt = reliability_per_challenge(ds, stage, temp_index);
  report.u_at_topt = uniqueness_per_challenge(ds, stage, temp_index);
  report.per_chip_r_at_topt = per_chip_reliability(ds, stage, temp_index);
  report.histogram = mu_histogram(ds, stage, temp_index);
  return report;
}

void write_mu_curves_csv(const std::string& path, const MuCurves& curves,
                         std::uint64_t input_hash) {
  std::ofstream out = open_csv(path, input_hash);
  out << "stage,t_ns,mu_intra,mu_inter,delta_mu,"
         "mu_intra_sd,mu_intra_se,mu_inter_sd,mu_inter_se,is_t_opt\n";
  for (std::size_t m = 0; m < curves.t_ns.size(); ++m) {
    out << (curves.t_opt_stage - curves.t_opt_index + static_cast<std::uint32_t>(m)) << ','
        << fmt(curves.t_ns[m]) << ',' << fmt(curves.mu_intra[m]) << ',' << fmt(curves.mu_inter[m])
        << ',' << fmt(curves.delta_mu[m]) << ',' << fmt(curves.mu_intra_sd[m]) << ','
        << fmt(curves.mu_intra_se[m]) << ',' << fmt(curves.mu_inter_sd[m]) << ','
        << fmt(curves.mu_inter_se[m]) << ',' << (m == curves.t_opt_index ? 1 : 0) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_hist_csv(const std::string& path, const std::vector<HistogramRow>& rows,
                    std::uint64_t input_hash) {
  std::ofstream out = open_csv(path, input_hash);
  out << "bin_lo,bin_hi,intra_count,inter_count\n";
  for (const auto& row : rows) {
    out << fmt(row.bin_lo) << ',' << fmt(row.bin_hi) << ',' << row.intra_count << ','
        << row.inter_count << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_per_challenge_csv(const std::string& path, const MetricsReport& report,
                             std::uint64_t input_hash) {
  std::ofstream out = open_csv(path, input_hash);
  out << "challenge_index,r,u\n";
  for (std::size_t c = 0; c < report.r_at_topt.size(); ++c) {
    out << c << ',' << fmt(report.r_at_topt[c]) << ',' << fmt(report.u_at_topt[c]) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_per_chip_csv(const std::string& path, const MetricsReport& report,
                        std::uint64_t input_hash) {
  std::ofstream out = open_csv(path, input_hash);
  out << "chip,challenge_index,r\n";
  for (std::size_t p = 0; p < report.per_chip_r_at_topt.size(); ++p) {
    for (std::size_t c = 0; c < report.per_chip_r_at_topt[p].size(); ++c) {
      out << p << ',' << c << ',' << fmt(report.per_chip_r_at_topt[p][c]) << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_mu_ref_csv(const std::string& path,
                      const std::vector<std::pair<double, MuRefCurve>>& curves_by_temp,
                      std::uint64_t input_hash) {
  std::ofstream out = open_csv(path, input_hash);
  out << "temperature_c,stage,t_ns,mu_raw,mu_masked\n";
  for (const auto& [temp, curve] : curves_by_temp) {
    for (std::size_t m = 0; m < curve.t_ns.size(); ++m) {
      out << fmt(temp) << ',' << (curve.stage_lo + m) << ',' << fmt(curve.t_ns[m]) << ','
          << fmt(curve.raw[m]) << ',';
      if (!curve.masked.empty()) out << fmt(curve.masked[m]);
      out << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace hbnpuf
