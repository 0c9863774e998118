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

#include "hbnpuf/bitvec.hpp"
#include "hbnpuf/physics.hpp"
#include "hbnpuf/simulator.hpp"
#include "hbnpuf/topology.hpp"

namespace hbnpuf {

enum class ChallengeMode { kExhaustive, kSampled };

// Enrollment/query campaign description. Exhaustive mode walks every valid
// challenge (all 2^N strings minus all-zero and all-one) and is limited to
// N <= 16; sampled mode draws unique valid challenges from sample_seed.
// noise_salt separates the noise streams of otherwise identical campaigns
// (an enrollment and a later query of the same chips must not replay the
// same jitter).
struct QueryProtocol {
  ChallengeMode mode = ChallengeMode::kSampled;
  std::uint32_t n_challenges = 1000;
  std::uint32_t n_repeats = 100;
  std::uint64_t sample_seed = 0;
  std::uint64_t noise_salt = 0;
  std::uint32_t stage_lo = 1;  // 1-based, inclusive
  std::uint32_t stage_hi = 0;  // 0 means m_stages
  std::vector<double> temperatures{20.0};

  void validate(std::uint32_t n_nodes, const PhysicsConfig& config) const;
  std::uint32_t resolved_stage_hi(const PhysicsConfig& config) const {
    return stage_hi == 0 ? config.m_stages : stage_hi;
  }
};

struct DatasetManifest {
  std::uint32_t format_version = 1;
  std::string role;  // "enroll", "query", or free-form tag
  NetworkTopology topology;
  PhysicsConfig physics;
  QueryProtocol protocol;
  std::vector<std::uint64_t> chip_seeds;
  bool has_trivial = true;  // all-zero/all-one responses recorded for glitch_check
  std::string tool;         // creation metadata (no timestamps: outputs must be
  std::string command;      // byte-identical across re-runs)
};

/// All 2^n - 2 valid challenges in lexicographic order. Throws for n > 16.
std::vector<BitVec> enumerate_valid_challenges(std::uint32_t n);

/// count unique valid challenges drawn from seed; deterministic.
std::vector<BitVec> sample_valid_challenges(std::uint32_t n, std::uint32_t count,
                                            std::uint64_t seed);

// Realized CRP table of one campaign: packed responses indexed
// (temperature, chip, challenge, repeat, stage), each cell one N-bit state
// with node 0 at the least significant bit of its first byte. The two trivial
// challenges are stored in a separate block with the same layout and are
// never part of the analyzed challenge list.
class CRPDataset {
 public:
  explicit CRPDataset(DatasetManifest manifest);

  const DatasetManifest& manifest() const { return manifest_; }
  const std::vector<BitVec>& challenges() const { return challenges_; }

  std::uint32_t n_temps() const { return static_cast<std::uint32_t>(manifest_.protocol.temperatures.size()); }
  std::uint32_t n_chips() const { return static_cast<std::uint32_t>(manifest_.chip_seeds.size()); }
  std::uint32_t n_challenges() const { return static_cast<std::uint32_t>(challenges_.size()); }
  std::uint32_t n_repeats() const { return manifest_.protocol.n_repeats; }
  std::uint32_t n_stages() const { return n_stages_; }
  std::uint32_t n_nodes() const { return manifest_.topology.n_nodes; }
  std::size_t cell_bytes() const { return cell_bytes_; }

  /// Global 1-based delay-line stage number of stored stage index m.
  std::uint32_t stage_number(std::uint32_t m) const { return manifest_.protocol.stage_lo + m; }
  /// Nominal capture time of stored stage index m, ns.
  double stage_time_ns(std::uint32_t m) const {
    return static_cast<double>(stage_number(m)) * manifest_.physics.gate_delay();
  }

  const std::uint8_t* cell(std::uint32_t t, std::uint32_t p, std::uint32_t c, std::uint32_t r,
                           std::uint32_t m) const {
    return bits_.data() + cell_index(t, p, c, r, m) * cell_bytes_;
  }
  std::uint8_t* cell_mut(std::uint32_t t, std::uint32_t p, std::uint32_t c, std::uint32_t r,
                         std::uint32_t m) {
    return bits_.data() + cell_index(t, p, c, r, m) * cell_bytes_;
  }
  BitVec response(std::uint32_t t, std::uint32_t p, std::uint32_t c, std::uint32_t r,
                  std::uint32_t m) const {
    return BitVec::from_bytes(cell(t, p, c, r, m), n_nodes());
  }
  void store_response(std::uint32_t t, std::uint32_t p, std::uint32_t c, std::uint32_t r,
                      std::uint32_t m, const BitVec& state);

  /// kind 0 = all-zero challenge, kind 1 = all-one challenge.
  const std::uint8_t* trivial_cell(std::uint32_t t, std::uint32_t p, std::uint32_t kind,
                                   std::uint32_t r, std::uint32_t m) const {
    return trivial_bits_.data() + trivial_index(t, p, kind, r, m) * cell_bytes_;
  }
  std::uint8_t* trivial_cell_mut(std::uint32_t t, std::uint32_t p, std::uint32_t kind,
                                 std::uint32_t r, std::uint32_t m) {
    return trivial_bits_.data() + trivial_index(t, p, kind, r, m) * cell_bytes_;
  }
  BitVec trivial_response(std::uint32_t t, std::uint32_t p, std::uint32_t kind, std::uint32_t r,
                          std::uint32_t m) const {
    return BitVec::from_bytes(trivial_cell(t, p, kind, r, m), n_nodes());
  }

  std::uint64_t data_hash() const;
  std::string manifest_json() const;

  /// Stamps creation metadata (tool, command line) into the manifest.
  void set_creation_metadata(std::string tool, std::string command) {
    manifest_.tool = std::move(tool);
    manifest_.command = std::move(command);
  }

  /// Writes <prefix>.manifest.json and <prefix>.crp.bin.
  void save(const std::string& prefix) const;
  static CRPDataset load(const std::string& prefix);

 private:
  std::size_t cell_index(std::uint32_t t, std::uint32_t p, std::uint32_t c, std::uint32_t r,
                         std::uint32_t m) const {
    return (((static_cast<std::size_t>(t) * n_chips() + p) * n_challenges() + c) * n_repeats() +
            r) * n_stages_ + m;
  }
  std::size_t trivial_index(std::uint32_t t, std::uint32_t p, std::uint32_t kind, std::uint32_t r,
                            std::uint32_t m) const {
    return (((static_cast<std::size_t>(t) * n_chips() + p) * 2 + kind) * n_repeats() + r) *
               n_stages_ + m;
  }

  DatasetManifest manifest_;
  std::vector<BitVec> challenges_;
  std::uint32_t n_stages_ = 0;
  std::size_t cell_bytes_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint8_t> trivial_bits_;
};

/// Runs the whole campaign: every (temperature, chip, challenge, repeat)
/// transient plus the two trivial challenges per (temperature, chip, repeat).
/// Deterministic in (topology, config, chip_seeds, protocol); independent of
/// worker count (0 = hardware concurrency).
CRPDataset collect(const NetworkTopology& topology, const PhysicsConfig& config,
                   const std::vector<std::uint64_t>& chip_seeds, const QueryProtocol& protocol,
                   const std::string& role = "", unsigned workers = 0);

struct GlitchOffender {
  std::uint32_t temp_index;
  std::uint32_t chip;
  std::uint32_t repeat;
  std::uint32_t stage_number;
  std::uint32_t kind;  // 0 = all-zero challenge, 1 = all-one
};
struct GlitchReport {
  bool pass = false;
  std::uint64_t violations = 0;
  std::vector<GlitchOffender> evidence;  // first few offenders
};

/// Sanity check for glitchy classes: both trivial challenges must reproduce
/// themselves in every snapshot of every chip and repeat. Failure is a
/// result, not an error; a dataset without the trivial block is a
/// precondition error.
GlitchReport glitch_check(const CRPDataset& dataset);

// Per-(chip, challenge, stage) keep-masks from enrollment flip rates, plus
// the threshold that produced them. Bits whose flip rate relative to the
// majority value exceeds the threshold are masked out.
class HelperMask {
 public:
  HelperMask(std::uint32_t n_chips, std::uint32_t n_challenges, std::uint32_t n_stages,
             std::uint32_t n_nodes, std::uint32_t stage_lo, double threshold);

  std::uint32_t n_chips() const { return n_chips_; }
  std::uint32_t n_challenges() const { return n_challenges_; }
  std::uint32_t n_stages() const { return n_stages_; }
  std::uint32_t n_nodes() const { return n_nodes_; }
  std::uint32_t stage_lo() const { return stage_lo_; }
  double threshold() const { return threshold_; }

  BitVec mask(std::uint32_t p, std::uint32_t c, std::uint32_t m) const {
    return BitVec::from_bytes(cell(p, c, m), n_nodes_);
  }
  const std::uint8_t* cell(std::uint32_t p, std::uint32_t c, std::uint32_t m) const {
    return bits_.data() + index(p, c, m) * cell_bytes_;
  }
  void store(std::uint32_t p, std::uint32_t c, std::uint32_t m, const BitVec& mask);

  /// Mean kept-bit count per stage, averaged over chips and challenges.
  std::vector<double> stable_bits_per_stage() const;

  void save(const std::string& prefix) const;  // <prefix>.helper.json/.bin
  static HelperMask load(const std::string& prefix);

 private:
  std::size_t index(std::uint32_t p, std::uint32_t c, std::uint32_t m) const {
    return (static_cast<std::size_t>(p) * n_challenges_ + c) * n_stages_ + m;
  }

  std::uint32_t n_chips_, n_challenges_, n_stages_, n_nodes_, stage_lo_;
  double threshold_;
  std::size_t cell_bytes_;
  std::vector<std::uint8_t> bits_;
};

/// Builds keep-masks for every stage of an enrollment dataset (one
/// temperature, >= 2 repeats). threshold must be inside [0, 0.5].
HelperMask cherry_pick(const CRPDataset& enroll, double threshold = 0.01,
                       std::uint32_t temp_index = 0);

struct MaskedResponse {
  BitVec bits;        // kept bits in ascending node order
  std::size_t count;  // popcount of the mask
};
MaskedResponse apply_mask(const BitVec& response, const BitVec& mask);

}  // namespace hbnpuf
