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
#include <vector>

#include "hbnpuf/bitvec.hpp"
#include "hbnpuf/physics.hpp"
#include "hbnpuf/rng.hpp"

namespace hbnpuf {

// M timestamped Boolean snapshots of one transient run.
struct Bitstream {
  BitVec challenge;
  std::vector<double> capture_times;  // ns, strictly increasing
  std::vector<BitVec> states;         // one N-bit snapshot per delay-line stage
  std::uint32_t chip_id = 0;
  std::uint32_t repeat = 0;
  double temperature_c = 20.0;
};

struct RunLimits {
  std::uint64_t max_events = 0;  // 0 selects max(1e6, 32*N*M)
};

/// Thresholding seam between the (here already Boolean) node level and the
/// registered bit. An analog backend would booleanize a real level here.
inline bool booleanize(bool level) { return level; }

// Event-driven Boolean-delay simulation of one chip. The engine owns reusable
// buffers, so batch callers should keep one instance per (thread, chip) and
// call run() repeatedly. Runs are self-contained: identical arguments give
// bit-identical bitstreams regardless of what ran before.
//
// Semantics, in brief: at t=0 every node holds its challenge bit and each
// input line carries the source's challenge bit. A node whose XOR3 disagrees
// with its held bit transitions at the mean of its three edge delays. A
// committed transition of node s reaches sink (i, k) after edge_delay[i][k],
// flips that line, and re-evaluates the sink's XOR3; an output change is
// scheduled at the arrival time plus Normal(0, sigma_noise) jitter. A
// scheduled transition annihilates the node's last pending opposite
// transition when they are closer than the pulse filter width (or out of
// order); a pulse that already committed gets the same treatment per in-flight
// edge, so no gate ever sees a pulse narrower than the filter. Snapshots are
// taken at the cumulative (temperature-scaled) readout delays; transitions
// landing exactly on a capture time are visible in that snapshot.
class TransientEngine {
 public:
  /// chip and config must outlive the engine.
  TransientEngine(const ChipInstance& chip, const PhysicsConfig& config);

  Bitstream run(const BitVec& challenge, std::uint64_t noise_seed, double temperature_c = 20.0,
                RunLimits limits = {});

  std::uint64_t last_event_count() const { return events_processed_; }

  struct Event {
    double time;
    std::uint32_t key;  // (kind << 28) | (node << 2) | slot; arrivals sort first
    std::uint32_t serial;
  };

 private:
  struct Pending {
    double time;
    std::uint32_t serial;
    std::uint8_t value;
  };

  void prepare(double temperature_c);
  void push_event(double time, std::uint32_t key);
  bool peek_time(double& time_out);
  Event pop_event();
  void schedule_candidate(std::uint32_t node, std::uint8_t value, double nominal_time);
  void commit_output(const Event& ev);
  void process_arrival(const Event& ev);

  const ChipInstance& chip_;
  const PhysicsConfig& config_;
  std::uint32_t n_;

  // Static fan-out in CSR form: fan_edges_ packs (sink << 2) | slot.
  std::vector<std::uint32_t> fan_offset_;
  std::vector<std::uint32_t> fan_edges_;

  // Per-run scaled timing.
  std::vector<std::array<double, 3>> delay_;
  std::vector<double> release_;
  std::vector<double> captures_;
  double width_ = 0.0;
  double net_scale_ = 1.0;
  double sigma_noise_ns_ = 0.0;
  double cached_temp_ = 1e300;

  // Dynamic state.
  std::vector<std::uint8_t> level_;
  std::vector<std::uint64_t> level_words_;
  std::vector<std::array<std::uint8_t, 3>> line_;
  std::vector<std::vector<Pending>> pend_out_;  // per node, ascending times
  std::vector<std::vector<Pending>> pend_arr_;  // per directed edge, ascending
  std::vector<Event> heap_;
  std::vector<std::uint8_t> cancelled_;
  std::uint32_t next_serial_ = 0;
  std::uint64_t events_processed_ = 0;
  SplitMix64 rng_{0};
};

/// Convenience wrapper building a fresh engine for a single run.
Bitstream run_transient(const ChipInstance& chip, const PhysicsConfig& config,
                        const BitVec& challenge, std::uint64_t noise_seed,
                        double temperature_c = 20.0, RunLimits limits = {});

}  // namespace hbnpuf
