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
#include <string_view>

#include "hbnpuf/topology.hpp"

namespace hbnpuf {

/// Structural Verilog-2001 for the autonomous network: per node one 3-input
/// XOR of its topology sources plus a reset/challenge multiplexer. The header
/// comment carries {format, n, seed, strict} so the text regenerates the
/// exact topology. Deterministic in its input; vendor-agnostic.
std::string emit_network_hdl(const NetworkTopology& topology);

/// Structural Verilog for the tapped delay line: 2*m_stages chained
/// inverters, a register-trigger tap after each pair, and a stage-select
/// multiplexer on the taps.
std::string emit_delayline_hdl(std::uint32_t m_stages);

/// Recovers the topology from emit_network_hdl() output. Node blocks may be
/// reordered; anything malformed or foreign raises DataError with the
/// offending line.
NetworkTopology parse_network_hdl(std::string_view text);

}  // namespace hbnpuf
