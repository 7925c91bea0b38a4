// Copyright 2026 The cvq Authors
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

// Text form of a GateSequence ("assembly"):
//
//   # comment
//   shift_p 0.30000000000000004 0
//   cross_px 0.4 0 1
//   global_phase -0.000675
//
// One gate per line as `kind parameter mode [mode]`, listed in
// operator-product order (first line = leftmost factor = applied last), then
// a single trailing `global_phase` line. Parameters are written with 17
// significant digits so parsing reproduces them exactly.

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cvq/gates.hpp"

namespace cvq {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string serialize(const GateSequence& seq) {
  std::string out = "# cvq gate sequence v1: first gate is the leftmost factor (applied last)\n";
  for (const GateSpec& g : seq.gates()) {
    out += std::string(to_string(g.kind)) + " " + format_double(g.parameter);
    for (int m : g.modes) out += " " + std::to_string(m);
    out += "\n";
  }
  out += "global_phase " + format_double(seq.global_phase()) + "\n";
  return out;
}

namespace detail {

inline double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ConfigError("assembly line " + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}

inline int parse_int(const std::string& tok, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ConfigError("assembly line " + std::to_string(line) + ": bad mode index '" + tok + "'");
  return v;
}

}  // namespace detail

inline GateSequence parse_sequence(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::vector<GateSpec> gates;
  bool have_phase = false;
  double phase = 0.0;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (have_phase) throw ConfigError("assembly line " + std::to_string(line) + ": content after global_phase");
    if (tok[0] == "global_phase") {
      if (tok.size() != 2) throw ConfigError("assembly line " + std::to_string(line) + ": malformed global_phase");
      phase = detail::parse_double(tok[1], line);
      have_phase = true;
      continue;
    }
    GateKind kind;
    try {
      kind = parse_gate_kind(tok[0]);
    } catch (const ContractViolation& e) {
      throw ConfigError("assembly line " + std::to_string(line) + ": " + e.what());
    }
    const std::size_t want = is_two_mode(kind) ? 4 : 3;
    if (tok.size() != want)
      throw ConfigError("assembly line " + std::to_string(line) + ": expected " + std::to_string(want) + " fields");
    GateSpec g{kind, detail::parse_double(tok[1], line), {}};
    for (std::size_t i = 2; i < tok.size(); ++i) g.modes.push_back(detail::parse_int(tok[i], line));
    gates.push_back(std::move(g));
  }
  if (!have_phase) throw ConfigError("assembly: missing trailing global_phase line");
  return GateSequence(std::move(gates), phase);
}

}  // namespace cvq
