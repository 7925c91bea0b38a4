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

// JSON experiment configurations (schema_version 1), built-in presets, and
// result files. Result files are written atomically: content goes to a
// sibling temporary file that is then renamed over the target.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvq/experiments.hpp"

namespace cvq {

inline constexpr int kSchemaVersion = 1;

// ------------------------------------------------------------- json <- --

namespace detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> known, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  std::set<std::string> ok(known.begin(), known.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline SplitStrategy split_from_json(const Json& j) {
  detail::reject_unknown(j, {"strategy", "value"}, "split");
  SplitStrategy s;
  std::string name = "balanced";
  detail::read(j, "strategy", name);
  try {
    s.kind = parse_split_kind(name);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  detail::read(j, "value", s.value);
  if (s.kind != SplitKind::balanced && s.value == 0.0) throw ConfigError("split: fixed strategies need a non-zero value");
  return s;
}

inline StateSpec state_from_json(const Json& j) {
  detail::reject_unknown(j, {"kind", "cutoff", "n", "alpha", "r", "c", "t"}, "state");
  StateSpec s;
  std::string kind = "vacuum";
  detail::read(j, "kind", kind);
  try {
    s.kind = parse_state_kind(kind);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  detail::read(j, "cutoff", s.cutoff);
  detail::read(j, "n", s.n);
  if (j.contains("alpha")) {
    const Json& a = j.at("alpha");
    if (a.is_number()) s.alpha = {a.get<double>(), 0.0};
    else if (a.is_array() && a.size() == 2) s.alpha = {a[0].get<double>(), a[1].get<double>()};
    else throw ConfigError("state: alpha must be a number or [re, im]");
  }
  detail::read(j, "r", s.r);
  detail::read(j, "c", s.c);
  detail::read(j, "t", s.t);
  return s;
}

namespace detail {

inline ExperimentConfig config_from_json_unchecked(const Json& j) {
  detail::reject_unknown(j, {"schema_version", "name", "kind", "cutoffs", "tolerances", "refine_factor", "output", "params"},
                         "config");
  ExperimentConfig cfg;
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  detail::read(j, "schema_version", cfg.schema_version);
  if (cfg.schema_version != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(cfg.schema_version));
  if (!j.contains("kind")) throw ConfigError("config: missing kind");
  const ExperimentKind kind = parse_experiment_kind(j.at("kind").get<std::string>());
  detail::read(j, "name", cfg.name);
  if (cfg.name.empty()) cfg.name = std::string(to_string(kind));
  detail::read(j, "cutoffs", cfg.cutoffs);
  for (Index d : cfg.cutoffs)
    if (d < 8) throw ConfigError("config: cutoffs must be at least 8");
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    detail::reject_unknown(t, {"convergence", "leakage"}, "tolerances");
    detail::read(t, "convergence", cfg.tolerances.convergence);
    detail::read(t, "leakage", cfg.tolerances.leakage);
  }
  if (!(cfg.tolerances.convergence > 0.0) || !(cfg.tolerances.leakage > 0.0))
    throw ConfigError("config: tolerances must be positive");
  detail::read(j, "refine_factor", cfg.refine_factor);
  detail::read(j, "output", cfg.output);

  const Json p = j.contains("params") ? j.at("params") : Json::object();
  switch (kind) {
    case ExperimentKind::squeezing: {
      detail::reject_unknown(p, {"db", "r", "split"}, "params");
      SqueezingParams sp;
      detail::read(p, "db", sp.db);
      if (p.contains("r")) sp.r = p.at("r").get<double>();
      if (p.contains("split")) sp.split = split_from_json(p.at("split"));
      cfg.params = sp;
      break;
    }
    case ExperimentKind::photon_counting: {
      detail::reject_unknown(p, {"photon_number", "ancilla_db", "theta_step", "repetitions", "order", "split",
                                 "candidates", "measure_shift_law"},
                             "params");
      PhotonCountingParams pp;
      detail::read(p, "photon_number", pp.photon_number);
      detail::read(p, "ancilla_db", pp.ancilla_db);
      detail::read(p, "theta_step", pp.theta_step);
      detail::read(p, "repetitions", pp.repetitions);
      detail::read(p, "order", pp.order);
      if (p.contains("split")) pp.split = split_from_json(p.at("split"));
      detail::read(p, "candidates", pp.candidates);
      detail::read(p, "measure_shift_law", pp.measure_shift_law);
      cfg.params = pp;
      break;
    }
    case ExperimentKind::identity_check: {
      detail::reject_unknown(p, {"t1", "t2", "two_mode_t1", "two_mode_t2", "single_mode_working", "two_mode_working",
                                 "tolerance"},
                             "params");
      IdentityParams ip;
      detail::read(p, "t1", ip.t1);
      detail::read(p, "t2", ip.t2);
      detail::read(p, "two_mode_t1", ip.two_mode_t1);
      detail::read(p, "two_mode_t2", ip.two_mode_t2);
      detail::read(p, "single_mode_working", ip.single_mode_working);
      detail::read(p, "two_mode_working", ip.two_mode_working);
      detail::read(p, "tolerance", ip.tolerance);
      cfg.params = ip;
      break;
    }
    case ExperimentKind::trotter_order: {
      detail::reject_unknown(p, {"theta", "orders", "split", "probe", "meter"}, "params");
      TrotterParams tp;
      detail::read(p, "theta", tp.theta);
      detail::read(p, "orders", tp.orders);
      if (p.contains("split")) tp.split = split_from_json(p.at("split"));
      if (p.contains("probe")) tp.probe = state_from_json(p.at("probe"));
      if (p.contains("meter")) tp.meter = state_from_json(p.at("meter"));
      cfg.params = tp;
      break;
    }
    case ExperimentKind::resolvability_table: {
      detail::reject_unknown(p, {"thetas", "dbs", "theta_step"}, "params");
      ResolvabilityParams rp;
      detail::read(p, "thetas", rp.thetas);
      detail::read(p, "dbs", rp.dbs);
      detail::read(p, "theta_step", rp.theta_step);
      cfg.params = rp;
      break;
    }
  }
  return cfg;
}

}  // namespace detail

/// Strict: unknown keys, wrong types and out-of-range values are ConfigErrors.
inline ExperimentConfig config_from_json(const Json& j) {
  try {
    return detail::config_from_json_unchecked(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ------------------------------------------------------------- json -> --

inline Json to_json(const SplitStrategy& s) { return split_report(s); }

inline Json to_json(const StateSpec& s) {
  Json j{{"kind", std::string(to_string(s.kind))}};
  switch (s.kind) {
    case StateKind::vacuum: break;
    case StateKind::fock: j["n"] = s.n; break;
    case StateKind::coherent: j["alpha"] = {s.alpha.real(), s.alpha.imag()}; break;
    case StateKind::squeezed_vacuum:
    case StateKind::p_eigenstate_approx: j["r"] = s.r; break;
    case StateKind::displaced_squeezed:
      j["r"] = s.r;
      j["alpha"] = {s.alpha.real(), s.alpha.imag()};
      break;
    case StateKind::cubic_phase_mff:
      j["t"] = s.t;
      j["r"] = s.r;
      j["c"] = s.c;
      break;
  }
  if (s.cutoff) j["cutoff"] = s.cutoff;
  return j;
}

inline Json to_json(const ExperimentConfig& cfg) {
  Json j{{"schema_version", cfg.schema_version},
         {"name", cfg.name},
         {"kind", std::string(to_string(cfg.kind()))},
         {"cutoffs", cfg.cutoffs},
         {"tolerances", {{"convergence", cfg.tolerances.convergence}, {"leakage", cfg.tolerances.leakage}}},
         {"refine_factor", cfg.refine_factor}};
  if (!cfg.output.empty()) j["output"] = cfg.output;
  Json p = Json::object();
  std::visit(
      [&](const auto& v) {
        using P = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<P, SqueezingParams>) {
          p["db"] = v.db;
          if (v.r) p["r"] = *v.r;
          p["split"] = to_json(v.split);
        } else if constexpr (std::is_same_v<P, PhotonCountingParams>) {
          p = {{"photon_number", v.photon_number}, {"ancilla_db", v.ancilla_db},   {"theta_step", v.theta_step},
               {"repetitions", v.repetitions},     {"order", v.order},             {"split", to_json(v.split)},
               {"candidates", v.candidates},       {"measure_shift_law", v.measure_shift_law}};
        } else if constexpr (std::is_same_v<P, IdentityParams>) {
          p = {{"t1", v.t1},
               {"t2", v.t2},
               {"two_mode_t1", v.two_mode_t1},
               {"two_mode_t2", v.two_mode_t2},
               {"single_mode_working", v.single_mode_working},
               {"two_mode_working", v.two_mode_working},
               {"tolerance", v.tolerance}};
        } else if constexpr (std::is_same_v<P, TrotterParams>) {
          p = {{"theta", v.theta},
               {"orders", v.orders},
               {"split", to_json(v.split)},
               {"probe", to_json(v.probe)},
               {"meter", to_json(v.meter)}};
        } else {
          p = {{"thetas", v.thetas}, {"dbs", v.dbs}, {"theta_step", v.theta_step}};
        }
      },
      cfg.params);
  j["params"] = p;
  return j;
}

inline Json to_json(const ExperimentResult& r) {
  Json headline = Json::object();
  for (const auto& [k, v] : r.headline) headline[k] = v;
  Json conv = Json::object();
  for (const auto& [k, c] : r.convergence) {
    auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    conv[k] = {{"value", c.value}, {"refined", num(c.refined)}, {"delta", num(c.delta)}, {"converged", c.converged}};
  }
  double max_leak = 0.0;
  for (double l : r.leakage) max_leak = std::max(max_leak, l);
  Json j{{"schema_version", kSchemaVersion},
         {"name", r.name},
         {"kind", std::string(to_string(r.kind))},
         {"cutoffs", r.cutoffs},
         {"refined_cutoffs", r.refined_cutoffs},
         {"headline", headline},
         {"convergence", {{"tolerance", r.convergence_tolerance}, {"converged", r.converged()}, {"metrics", conv}}},
         {"plan", r.plan},
         {"diagnostics", r.diagnostics},
         {"leakage", {{"max", max_leak}, {"per_step", r.leakage}}},
         {"truncation_unsafe", r.truncation_unsafe},
         {"wall_time_s", r.wall_time_s}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

// ---------------------------------------------------------------- presets --

inline std::vector<std::string> preset_names() {
  return {"photon_counting_paper", "squeezing_10db", "squeezing_3db", "identities", "trotter_order",
          "resolvability_table"};
}

inline ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "photon_counting_paper") {
    cfg.cutoffs = {48, 96};
    cfg.params = PhotonCountingParams{};
  } else if (name == "squeezing_10db") {
    cfg.cutoffs = {128};
    cfg.params = SqueezingParams{};
  } else if (name == "squeezing_3db") {
    cfg.cutoffs = {64};
    SqueezingParams sp;
    sp.db = 3.0;
    cfg.params = sp;
  } else if (name == "identities") {
    cfg.cutoffs = {64, 24};
    cfg.tolerances.convergence = 1e-7;
    cfg.params = IdentityParams{};
  } else if (name == "trotter_order") {
    cfg.cutoffs = {24, 24};
    cfg.params = TrotterParams{};
  } else if (name == "resolvability_table") {
    cfg.params = ResolvabilityParams{};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return cfg;
}

/// A readable file path, else a built-in preset name.
inline ExperimentConfig resolve_config(const std::string& ref) {
  if (std::filesystem::exists(ref)) return load_config(ref);
  for (const auto& p : preset_names())
    if (p == ref) return preset(ref);
  throw ConfigError("cannot read config '" + ref + "' (not a file or a preset)");
}

/// CVQ_CUTOFFS="32" or "32,48" replaces the configured cutoffs.
inline void apply_env_overrides(ExperimentConfig& cfg) {
  const char* env = std::getenv("CVQ_CUTOFFS");
  if (!env || !*env) return;
  std::vector<Index> vals;
  std::stringstream ss(env);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      vals.push_back(std::stol(tok));
    } catch (const std::exception&) {
      throw ConfigError("CVQ_CUTOFFS: bad value '" + tok + "'");
    }
  }
  for (Index v : vals)
    if (v < 8) throw ConfigError("CVQ_CUTOFFS: cutoffs must be at least 8");
  if (cfg.cutoffs.empty()) return;
  if (vals.size() == 1) {
    std::fill(cfg.cutoffs.begin(), cfg.cutoffs.end(), vals[0]);
  } else if (vals.size() == cfg.cutoffs.size()) {
    cfg.cutoffs = vals;
  } else {
    throw ConfigError("CVQ_CUTOFFS: expected 1 or " + std::to_string(cfg.cutoffs.size()) + " values");
  }
}

// ---------------------------------------------------------------- output --

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

/// Writes <name>.result.json plus <name>.sequence.txt and <name>.csv when
/// present. Returns the written paths.
inline std::vector<std::filesystem::path> write_result(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  const std::filesystem::path base = dir / r.name;
  paths.push_back(std::filesystem::path(base.string() + ".result.json"));
  write_file_atomic(paths.back(), to_json(r).dump(2) + "\n");
  if (r.sequence) {
    paths.push_back(std::filesystem::path(base.string() + ".sequence.txt"));
    write_file_atomic(paths.back(), serialize(*r.sequence));
  }
  if (r.table) {
    paths.push_back(std::filesystem::path(base.string() + ".csv"));
    write_file_atomic(paths.back(), r.table->to_csv());
  }
  return paths;
}

}  // namespace cvq
