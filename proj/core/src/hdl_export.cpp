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

#include "hbnpuf/hdl_export.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <vector>

#include "hbnpuf/errors.hpp"

namespace hbnpuf {

namespace {

constexpr int kHdlFormat = 1;

std::uint32_t select_width(std::uint32_t m_stages) {
  std::uint32_t width = 1;
  while ((std::uint64_t{1} << width) < m_stages) ++width;
  return width;
}

}  // namespace

std::string emit_network_hdl(const NetworkTopology& topology) {
  validate_topology(topology);
  const std::uint32_t n = topology.n_nodes;
  std::ostringstream out;
  out << "// hbnpuf-hdl format=" << kHdlFormat << " kind=abn n=" << n << " seed="
      << topology.seed << " strict=" << (topology.strict_out_regular ? 1 : 0) << "\n";
  out << "// Autonomous 3-XOR network: node_q[i] holds challenge[i] while reset is high,\n"
         "// then follows node_x[i], the XOR of the node's three sources.\n";
  out << "module hbn_abn_n" << n << " (\n"
      << "    input  wire " << "          reset,\n"
      << "    input  wire [" << (n - 1) << ":0] challenge,\n"
      << "    output wire [" << (n - 1) << ":0] state\n"
      << ");\n"
      << "    wire [" << (n - 1) << ":0] node_q;\n"
      << "    wire [" << (n - 1) << ":0] node_x;\n\n";
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& e = topology.in_edges[i];
    out << "    assign node_x[" << i << "] = node_q[" << e[0] << "] ^ node_q[" << e[1]
        << "] ^ node_q[" << e[2] << "];\n";
    out << "    assign node_q[" << i << "] = reset ? challenge[" << i << "] : node_x[" << i
        << "];\n";
  }
  out << "\n    assign state = node_q;\nendmodule\n";
  return out.str();
}

std::string emit_delayline_hdl(std::uint32_t m_stages) {
  if (m_stages < 1) throw ConfigError("emit_delayline_hdl: m_stages must be >= 1");
  const std::uint32_t inverters = 2 * m_stages;
  std::ostringstream out;
  out << "// hbnpuf-hdl format=" << kHdlFormat << " kind=tdl m=" << m_stages << "\n";
  out << "// Tapped delay line: the reset edge ripples through " << inverters
      << " inverters; tap k\n"
         "// fires after inverter pair k and triggers the stage-k capture register.\n";
  out << "module hbn_tdl_m" << m_stages << " (\n"
      << "    input  wire        reset_in,\n"
      << "    input  wire [" << (select_width(m_stages) - 1) << ":0] stage_sel,\n"
      << "    output wire [" << (m_stages - 1) << ":0] tap,\n"
      << "    output wire        trigger\n"
      << ");\n"
      << "    wire [" << (inverters - 1) << ":0] inv;\n\n";
  for (std::uint32_t k = 0; k < m_stages; ++k) {
    const std::uint32_t first = 2 * k, second = 2 * k + 1;
    if (k == 0) {
      out << "    assign inv[0] = ~reset_in;\n";
    } else {
      out << "    assign inv[" << first << "] = ~inv[" << (first - 1) << "];\n";
    }
    out << "    assign inv[" << second << "] = ~inv[" << first << "];\n";
    out << "    assign tap[" << k << "] = inv[" << second << "];\n";
  }
  out << "\n    assign trigger = tap[stage_sel];\nendmodule\n";
  return out.str();
}

NetworkTopology parse_network_hdl(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  // Header carries everything needed to reproduce the exact topology value.
  if (!std::getline(in, line)) throw DataError("hdl parse: empty input");
  ++line_no;
  int format = 0, strict = 0;
  unsigned n = 0;
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "// hbnpuf-hdl format=%d kind=abn n=%u seed=%llu strict=%d",
                  &format, &n, &seed, &strict) != 4) {
    throw DataError("hdl parse: line 1: not an hbnpuf abn header");
  }
  if (format != kHdlFormat) {
    throw DataError("hdl parse: unsupported format version " + std::to_string(format));
  }
  if (n < 4) throw DataError("hdl parse: header n out of range");

  NetworkTopology topology;
  topology.n_nodes = n;
  topology.seed = seed;
  topology.strict_out_regular = strict != 0;
  topology.in_edges.assign(n, {0, 0, 0});
  std::vector<bool> seen_xor(n, false), seen_mux(n, false);
  bool saw_endmodule = false;

  while (std::getline(in, line)) {
    ++line_no;
    unsigned i = 0, a = 0, b = 0, c = 0;
    if (std::sscanf(line.c_str(), " assign node_x[%u] = node_q[%u] ^ node_q[%u] ^ node_q[%u];",
                    &i, &a, &b, &c) == 4) {
      if (i >= n || a >= n || b >= n || c >= n) {
        throw DataError("hdl parse: line " + std::to_string(line_no) + ": node index out of range");
      }
      if (seen_xor[i]) {
        throw DataError("hdl parse: line " + std::to_string(line_no) + ": duplicate node block " +
                        std::to_string(i));
      }
      seen_xor[i] = true;
      topology.in_edges[i] = {a, b, c};
      continue;
    }
    unsigned mi = 0, mc = 0, mx = 0;
    if (std::sscanf(line.c_str(), " assign node_q[%u] = reset ? challenge[%u] : node_x[%u];",
                    &mi, &mc, &mx) == 3) {
      if (mi >= n || mi != mc || mi != mx) {
        throw DataError("hdl parse: line " + std::to_string(line_no) +
                        ": inconsistent multiplexer block");
      }
      seen_mux[mi] = true;
      continue;
    }
    if (line.rfind("endmodule", 0) == 0) saw_endmodule = true;
  }
  if (!saw_endmodule) throw DataError("hdl parse: truncated text (no endmodule)");
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!seen_xor[i] || !seen_mux[i]) {
      throw DataError("hdl parse: node " + std::to_string(i) + " block missing");
    }
  }
  validate_topology(topology);
  return topology;
}

}  // namespace hbnpuf
