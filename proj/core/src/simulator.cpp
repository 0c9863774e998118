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

#include "hbnpuf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbnpuf/errors.hpp"
#include "hbnpuf/rng.hpp"

namespace hbnpuf {

namespace {

constexpr std::uint64_t kRunNoiseTag = 0x72756e2d6e6f6973ULL;
constexpr std::uint32_t kKindArrival = 0;  // sorts before outputs at equal time
constexpr std::uint32_t kKindOutput = 1;

}  // namespace

// Min-heap order: time, then key (arrivals before outputs, then node, slot),
// then insertion serial. Total and deterministic.
struct EventAfter {
  bool operator()(const TransientEngine::Event& a, const TransientEngine::Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.key != b.key) return a.key > b.key;
    return a.serial > b.serial;
  }
};

TransientEngine::TransientEngine(const ChipInstance& chip, const PhysicsConfig& config)
    : chip_(chip), config_(config), n_(chip.topology.n_nodes) {
  config_.validate();
  validate_topology(chip_.topology);
  if (chip_.edge_delay.size() != n_ || chip_.readout_delay.size() != config_.m_stages) {
    throw DataError("TransientEngine: chip delay arrays inconsistent with topology/config");
  }

  // CSR fan-out from the in-edge list.
  fan_offset_.assign(n_ + 1, 0);
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t src : chip_.topology.in_edges[i]) ++fan_offset_[src + 1];
  }
  for (std::uint32_t i = 0; i < n_; ++i) fan_offset_[i + 1] += fan_offset_[i];
  fan_edges_.resize(fan_offset_[n_]);
  std::vector<std::uint32_t> cursor(fan_offset_.begin(), fan_offset_.end() - 1);
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t k = 0; k < 3; ++k) {
      const std::uint32_t src = chip_.topology.in_edges[i][k];
      fan_edges_[cursor[src]++] = (i << 2) | k;
    }
  }

  delay_.resize(n_);
  release_.resize(n_);
  captures_.resize(config_.m_stages);
  level_.resize(n_);
  level_words_.resize((n_ + 63) / 64);
  line_.resize(n_);
  pend_out_.resize(n_);
  pend_arr_.resize(static_cast<std::size_t>(n_) * 3);
}

void TransientEngine::prepare(double temperature_c) {
  if (temperature_c == cached_temp_) return;
  const TemperatureScale scale = temperature_scale(config_, temperature_c);
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (int k = 0; k < 3; ++k) delay_[i][k] = chip_.edge_delay[i][k] * scale.network;
    // Release path: the handover from held bit to XOR output skips the input
    // wiring, so it is slightly shorter than a full node hop. Keeping it
    // strictly inside one gate delay offsets the transition waves from the
    // capture comb. Scaled by the node's own frozen variation.
    release_[i] = 0.9 * (delay_[i][0] + delay_[i][1] + delay_[i][2]) / 3.0;
  }
  double cum = 0.0;
  for (std::uint32_t m = 0; m < config_.m_stages; ++m) {
    cum += chip_.readout_delay[m] * scale.readout;
    captures_[m] = cum;
  }
  // The filter is a gate property, so it tracks the network timescale.
  width_ = config_.pulse_filter_width * scale.network;
  net_scale_ = scale.network;
  cached_temp_ = temperature_c;
}

void TransientEngine::push_event(double time, std::uint32_t key) {
  heap_.push_back(Event{time, key, next_serial_++});
  cancelled_.push_back(0);
  std::push_heap(heap_.begin(), heap_.end(), EventAfter{});
}

// Drops cancelled entries off the top; returns false when drained.
bool TransientEngine::peek_time(double& time_out) {
  while (!heap_.empty() && cancelled_[heap_.front().serial]) {
    std::pop_heap(heap_.begin(), heap_.end(), EventAfter{});
    heap_.pop_back();
  }
  if (heap_.empty()) return false;
  time_out = heap_.front().time;
  return true;
}

TransientEngine::Event TransientEngine::pop_event() {
  std::pop_heap(heap_.begin(), heap_.end(), EventAfter{});
  const Event ev = heap_.back();
  heap_.pop_back();
  return ev;
}

void TransientEngine::schedule_candidate(std::uint32_t node, std::uint8_t value,
                                         double nominal_time) {
  auto& pend = pend_out_[node];
  const std::uint8_t scheduled = pend.empty() ? level_[node] : pend.back().value;
  if (value == scheduled) return;  // change already absorbed
  double t = nominal_time;
  if (sigma_noise_ns_ > 0.0) {
    // Chaos amplifies the accumulated analog timing divergence, so the
    // effective jitter grows exponentially with elapsed time. A transition
    // cannot wander further than half a gate delay and remain itself.
    const double sigma = sigma_noise_ns_ * std::exp(config_.chaos_rate * nominal_time);
    double jitter = rng_.normal(0.0, sigma);
    const double clamp = 0.5 * config_.gate_delay() * net_scale_;
    if (jitter > clamp) jitter = clamp;
    if (jitter < -clamp) jitter = -clamp;
    t += jitter;
  }
  if (!pend.empty()) {
    const Pending& last = pend.back();
    // Opposite transitions closer than the filter width (or out of order)
    // annihilate: the pulse is too narrow to form.
    if (t <= last.time || t - last.time < width_) {
      cancelled_[last.serial] = 1;
      pend.pop_back();
      return;
    }
  }
  const std::uint32_t key = (kKindOutput << 28) | (node << 2);
  pend.push_back(Pending{t, next_serial_, value});
  push_event(t, key);
}

void TransientEngine::commit_output(const Event& ev) {
  const std::uint32_t node = (ev.key >> 2) & 0x03ffffffu;
  auto& pend = pend_out_[node];
  pend.erase(pend.begin());  // this event is the node's earliest pending one
  level_[node] ^= 1u;
  level_words_[node >> 6] ^= std::uint64_t{1} << (node & 63);
  const std::uint8_t value = level_[node];

  for (std::uint32_t e = fan_offset_[node]; e < fan_offset_[node + 1]; ++e) {
    const std::uint32_t sink = fan_edges_[e] >> 2;
    const std::uint32_t slot = fan_edges_[e] & 3;
    const double arrival = ev.time + delay_[sink][slot];
    auto& queue = pend_arr_[sink * 3 + slot];
    if (!queue.empty()) {
      const Pending& last = queue.back();
      if (arrival <= last.time || arrival - last.time < width_) {
        // The pulse narrows below the filter width in flight; both edges die.
        cancelled_[last.serial] = 1;
        queue.pop_back();
        continue;
      }
    }
    const std::uint32_t key = (kKindArrival << 28) | (sink << 2) | slot;
    queue.push_back(Pending{arrival, next_serial_, value});
    push_event(arrival, key);
  }
}

void TransientEngine::process_arrival(const Event& ev) {
  const std::uint32_t node = (ev.key >> 2) & 0x03ffffffu;
  const std::uint32_t slot = ev.key & 3;
  auto& queue = pend_arr_[node * 3 + slot];
  queue.erase(queue.begin());
  line_[node][slot] ^= 1u;
  const std::uint8_t value =
      static_cast<std::uint8_t>(line_[node][0] ^ line_[node][1] ^ line_[node][2]);
  schedule_candidate(node, value, ev.time);
}

Bitstream TransientEngine::run(const BitVec& challenge, std::uint64_t noise_seed,
                               double temperature_c, RunLimits limits) {
  if (challenge.size() != n_) {
    throw DataError("run_transient: challenge length " + std::to_string(challenge.size()) +
                    " != N=" + std::to_string(n_));
  }
  prepare(temperature_c);
  sigma_noise_ns_ = config_.sigma_noise * 1e-3;
  rng_ = SplitMix64(derive_seed({kRunNoiseTag, noise_seed, chip_.chip_seed, challenge.hash64()}));

  std::uint64_t budget = limits.max_events;
  if (budget == 0) {
    budget = std::max<std::uint64_t>(1'000'000,
                                     32ull * n_ * static_cast<std::uint64_t>(config_.m_stages));
  }

  heap_.clear();
  cancelled_.clear();
  next_serial_ = 0;
  events_processed_ = 0;
  std::fill(level_words_.begin(), level_words_.end(), 0);
  for (std::uint32_t i = 0; i < n_; ++i) {
    const std::uint8_t bit = challenge.get(i) ? 1u : 0u;
    level_[i] = bit;
    if (bit) level_words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    pend_out_[i].clear();
  }
  for (std::uint32_t i = 0; i < n_; ++i) {
    const auto& e = chip_.topology.in_edges[i];
    line_[i] = {level_[e[0]], level_[e[1]], level_[e[2]]};
  }
  for (auto& q : pend_arr_) q.clear();

  // Release: nodes whose XOR3 disagrees with the held bit start switching.
  for (std::uint32_t i = 0; i < n_; ++i) {
    const std::uint8_t v = static_cast<std::uint8_t>(line_[i][0] ^ line_[i][1] ^ line_[i][2]);
    if (v != level_[i]) schedule_candidate(i, v, release_[i]);
  }

  Bitstream bs;
  bs.challenge = challenge;
  bs.capture_times.assign(captures_.begin(), captures_.end());
  bs.states.reserve(config_.m_stages);
  bs.chip_id = chip_.chip_id;
  bs.temperature_c = temperature_c;

  for (std::uint32_t m = 0; m < config_.m_stages; ++m) {
    const double t_cap = captures_[m];
    double t_next = 0.0;
    while (peek_time(t_next) && t_next <= t_cap) {
      const Event ev = pop_event();
      if (++events_processed_ > budget) {
        throw SimulationError("event budget exhausted (cap=" + std::to_string(budget) +
                              " events): runaway oscillation or pathological parameters");
      }
      if ((ev.key >> 28) == kKindArrival) {
        process_arrival(ev);
      } else {
        commit_output(ev);
      }
    }
    // booleanize() is the identity on this backend; levels are kept bitwise.
    bs.states.push_back(BitVec::from_words(level_words_.data(), n_));
  }
  return bs;
}

Bitstream run_transient(const ChipInstance& chip, const PhysicsConfig& config,
                        const BitVec& challenge, std::uint64_t noise_seed, double temperature_c,
                        RunLimits limits) {
  TransientEngine engine(chip, config);
  return engine.run(challenge, noise_seed, temperature_c, limits);
}

}  // namespace hbnpuf
