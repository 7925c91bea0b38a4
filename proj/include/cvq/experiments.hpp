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

// Declarative experiments over the compiled sequences. Each run measures its
// headline metrics at the configured cutoffs and again at `refine_factor`
// times those cutoffs; the difference is the convergence certificate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cvq/assembly.hpp"
#include "cvq/compiler.hpp"
#include "cvq/states.hpp"

namespace cvq {

using Json = nlohmann::ordered_json;

enum class ExperimentKind { squeezing, photon_counting, identity_check, trotter_order, resolvability_table };

inline std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::squeezing: return "squeezing";
    case ExperimentKind::photon_counting: return "photon_counting";
    case ExperimentKind::identity_check: return "identity_check";
    case ExperimentKind::trotter_order: return "trotter_order";
    case ExperimentKind::resolvability_table: return "resolvability_table";
  }
  return "unknown";
}

inline ExperimentKind parse_experiment_kind(std::string_view name) {
  for (ExperimentKind k : {ExperimentKind::squeezing, ExperimentKind::photon_counting, ExperimentKind::identity_check,
                           ExperimentKind::trotter_order, ExperimentKind::resolvability_table})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

struct SqueezingParams {
  double db = 10.0;
  std::optional<double> r;  // overrides db when set
  SplitStrategy split = SplitStrategy::balanced();

  double target_r() const { return r ? *r : db_to_r(db); }
};

struct PhotonCountingParams {
  int photon_number = 2;
  double ancilla_db = 10.0;
  double theta_step = 0.1;
  int repetitions = 14;
  int order = 1;
  SplitStrategy split = SplitStrategy::balanced();
  std::vector<int> candidates;  // empty: n-1, n, n+1
  bool measure_shift_law = true;
};

/// Cutoffs of an identity check are the comparison frames (single-mode,
/// two-mode per mode); deviations are taken on the lower half of each frame
/// with both sides evaluated in the larger working spaces.
struct IdentityParams {
  double t1 = 0.3;
  double t2 = 0.3;
  double two_mode_t1 = 0.4;
  double two_mode_t2 = 0.4;
  Index single_mode_working = 256;
  Index two_mode_working = 64;
  double tolerance = 1e-7;
};

struct TrotterParams {
  double theta = 0.2;  // compared against theta / 2
  std::vector<int> orders{1, 2};
  SplitStrategy split = SplitStrategy::balanced();
  StateSpec probe{StateKind::fock, 0, 1};
  StateSpec meter{StateKind::vacuum};
};

struct ResolvabilityParams {
  std::vector<double> thetas{0.1, 0.5, 1.0, 1.28, 1.4, 2.0};
  std::vector<double> dbs{3.0, 6.0, 10.0, 15.0, 20.0, 32.0, 33.0};
  double theta_step = 0.1;
};

using ExperimentParams =
    std::variant<SqueezingParams, PhotonCountingParams, IdentityParams, TrotterParams, ResolvabilityParams>;

struct Tolerances {
  double convergence = 1e-3;
  double leakage = kLeakageThreshold;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string name;
  std::vector<Index> cutoffs;
  Tolerances tolerances;
  double refine_factor = 1.5;
  std::string output;
  ExperimentParams params;

  ExperimentKind kind() const { return static_cast<ExperimentKind>(params.index()); }
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

struct ConvergenceEntry {
  double value;
  double refined;
  double delta;
  bool converged;
};

using Metrics = std::vector<std::pair<std::string, double>>;

struct ExperimentResult {
  std::string name;
  ExperimentKind kind;
  std::vector<Index> cutoffs;
  std::vector<Index> refined_cutoffs;
  Metrics headline;
  std::vector<std::pair<std::string, ConvergenceEntry>> convergence;
  double convergence_tolerance = 0.0;
  Json plan = Json::object();
  Json diagnostics = Json::object();
  std::vector<double> leakage;
  bool truncation_unsafe = false;
  std::string error;
  double wall_time_s = 0.0;
  std::optional<GateSequence> sequence;
  std::optional<Table> table;

  bool converged() const {
    if (truncation_unsafe || convergence.size() != headline.size()) return false;
    return std::all_of(convergence.begin(), convergence.end(), [](const auto& c) { return c.second.converged; });
  }

  double metric(std::string_view key) const {
    for (const auto& [k, v] : headline)
      if (k == key) return v;
    throw ContractViolation("no headline metric '" + std::string(key) + "'");
  }

  bool has_metric(std::string_view key) const {
    return std::any_of(headline.begin(), headline.end(), [&](const auto& m) { return m.first == key; });
  }
};

// ----------------------------------------------------------- plan reports --

inline Json split_report(const SplitStrategy& s) {
  Json j{{"strategy", std::string(to_string(s.kind))}};
  if (s.kind != SplitKind::balanced) j["value"] = s.value;
  return j;
}

inline Json plan_report(const SqueezerPlan& p) {
  return Json{{"target", "squeeze"}, {"r", p.r},           {"db", r_to_db(p.r)},
              {"t", p.t},            {"t1", p.t1},         {"t2", p.t2},
              {"cubic_strength", p.t2 / 3.0},              {"phi1", p.phi1},
              {"phi2", p.phi2},      {"gates", p.sequence.size()},
              {"global_phase", p.sequence.global_phase()}};
}

inline Json plan_report(const CouplerPlan& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks)
    blocks.push_back({{"target", std::string(to_string(b.target))}, {"theta", b.theta}, {"t1", b.t1}, {"t2", b.t2}});
  return Json{{"target", "number_coupler"},
              {"theta_total", p.theta_total},
              {"theta_step", p.theta_step},
              {"repetitions", p.repetitions},
              {"splitting_order", p.splitting_order},
              {"blocks", blocks},
              {"gates", p.sequence.size()}};
}

// ------------------------------------------------------------ measurement --

/// One evaluation of an experiment at a given cutoff scale.
struct Measurement {
  std::vector<Index> cutoffs;
  Metrics headline;
  Json plan = Json::object();
  Json diagnostics = Json::object();
  ApplyReport report;
  std::optional<GateSequence> sequence;
  std::optional<Table> table;
};

namespace detail {

inline Index scaled(Index d, double scale) { return static_cast<Index>(std::ceil(static_cast<double>(d) * scale - 1e-9)); }

inline Index cutoff_at(const ExperimentConfig& cfg, std::size_t i, double scale) {
  if (cfg.cutoffs.size() <= i)
    throw ConfigError("experiment '" + cfg.name + "' needs at least " + std::to_string(i + 1) + " cutoff(s)");
  return scaled(cfg.cutoffs[i], scale);
}

inline double total_variation(const RealVector& p, const RealVector& q) { return 0.5 * (p - q).cwiseAbs().sum(); }

inline void measure_squeezing(const ExperimentConfig& cfg, const SqueezingParams& sp, double scale, Measurement& m) {
  const Index d = cutoff_at(cfg, 0, scale);
  m.cutoffs = {d};
  const double r = sp.target_r();
  if (r < 0.0) throw DomainError("squeezing: target must be non-negative");
  GateSequence seq;
  if (r > 0.0) {
    const SqueezerPlan plan = compile_squeezer(r, sp.split);
    m.plan = plan_report(plan);
    seq = plan.sequence;
  } else {
    m.plan = Json{{"target", "squeeze"}, {"r", 0.0}, {"db", 0.0}, {"gates", 0}};
  }
  m.plan["split"] = split_report(sp.split);
  m.sequence = seq;
  const FockVector out = apply(seq, vacuum(d), &m.report, cfg.tolerances.leakage);
  const auto q = build_quadratures(d);
  const QuadratureStats xs = quadrature_statistics(out, q.x);
  const QuadratureStats ps = quadrature_statistics(out, q.p);
  m.headline = {{"x_variance", xs.variance},
                {"achieved_db", -10.0 * std::log10(xs.variance / 0.25)},
                {"fidelity", fidelity(out, squeezed_vacuum(r, d))}};
  m.diagnostics = {{"target_db", r_to_db(r)},
                   {"ideal_x_variance", 0.25 * std::exp(-2.0 * r)},
                   {"x_mean", xs.mean},
                   {"p_variance", ps.variance}};
}

inline void measure_photon_counting(const ExperimentConfig& cfg, const PhotonCountingParams& pp, double scale,
                                    Measurement& m) {
  const Index d0 = cutoff_at(cfg, 0, scale), d1 = cutoff_at(cfg, 1, scale);
  m.cutoffs = {d0, d1};
  if (pp.repetitions < 0) throw ConfigError("photon_counting: repetitions must be non-negative");
  const double r = db_to_r(pp.ancilla_db);
  const double theta_total = pp.repetitions * pp.theta_step;
  const CouplerPlan plan = compile_number_coupler(theta_total, pp.theta_step, pp.order, pp.split);
  m.plan = plan_report(plan);
  m.plan["split"] = split_report(pp.split);
  m.plan["ancilla_db"] = pp.ancilla_db;
  m.plan["ancilla_r"] = r;
  m.sequence = plan.sequence;

  const FockVector meter = p_eigenstate_approx(r, d1);
  auto input = [&](int n) { return tensor(fock_state(n, d0), meter); };
  const FockVector in = input(pp.photon_number);
  const FockVector out = apply(plan.sequence, in, &m.report, cfg.tolerances.leakage);
  const FockVector direct = apply_gate(make_gate(GateKind::number_coupler, theta_total), in);
  const DensityMatrix rho = partial_trace_first_mode(out);
  const DensityMatrix rho_direct = partial_trace_first_mode(direct);

  std::vector<int> candidates = pp.candidates;
  if (candidates.empty())
    for (int k = pp.photon_number - 1; k <= pp.photon_number + 1; ++k)
      if (k >= 0) candidates.push_back(k);

  const auto q = build_quadratures(d1);
  Json ideal = Json::object(), direct_fid = Json::object();
  const double peak = shift_per_photon(theta_total, ShiftRule::eq13) * (pp.photon_number + 0.5);
  for (int k : candidates) {
    const double shift = shift_per_photon(theta_total, ShiftRule::eq13) * (k + 0.5);
    const FockVector ref = displaced_p_eigenstate(r, shift, d1);
    m.headline.emplace_back("fidelity_n" + std::to_string(k), fidelity(rho, ref));
    direct_fid["n" + std::to_string(k)] = fidelity(rho_direct, ref);
    const double ov = squeezed_overlap(shift - peak, r);
    ideal["n" + std::to_string(k)] = ov * ov;
  }
  const RealVector before = mode_populations(in, 0);
  m.headline.emplace_back("qnd_tv_compiled", total_variation(mode_populations(out, 0), before));
  const double mean_p = quadrature_statistics(rho, q.p).mean;
  m.headline.emplace_back("mean_p2", mean_p);

  m.diagnostics["reference_shift_rule"] = "eq13";
  m.diagnostics["direct_fidelity"] = direct_fid;
  m.diagnostics["analytic_fidelity"] = ideal;
  m.diagnostics["qnd_tv_direct"] = total_variation(mode_populations(direct, 0), before);
  m.diagnostics["mean_p2_direct"] = quadrature_statistics(rho_direct, q.p).mean;

  if (pp.measure_shift_law && plan.repetitions > 0) {
    const FockVector out_next = apply(plan.sequence, input(pp.photon_number + 1), nullptr, cfg.tolerances.leakage);
    const double sep = quadrature_statistics(partial_trace_first_mode(out_next), q.p).mean - mean_p;
    m.headline.emplace_back("shift_per_photon_measured", sep);
    const double eq13 = shift_per_photon(theta_total, ShiftRule::eq13);
    const double paper_d = shift_per_photon(theta_total, ShiftRule::paper_d);
    m.diagnostics["shift_law"] = {
        {"measured", sep},
        {"eq13_prediction", eq13},
        {"paper_d_prediction", paper_d},
        {"matches", std::abs(sep - eq13) <= std::abs(sep - paper_d) ? "eq13" : "paper_d"}};
  }
}

inline void measure_identities(const ExperimentConfig& cfg, const IdentityParams& ip, double scale, Measurement& m) {
  const Index f1 = cfg.cutoffs.empty() ? 64 : cfg.cutoffs[0];
  const Index f2 = cfg.cutoffs.size() > 1 ? cfg.cutoffs[1] : 24;
  const Dims sub1{f1 / 2}, sub2{f2 / 2, f2 / 2};
  const Dims work1{scaled(ip.single_mode_working, scale)};
  const Dims work2{scaled(ip.two_mode_working, scale), scaled(ip.two_mode_working, scale)};
  if (work1[0] < f1 || work2[0] < f2) throw ConfigError("identity_check: working space smaller than frame");
  m.cutoffs = {work1[0], work2[0]};

  auto deviation = [](const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); };
  const double t1 = ip.t1, t2 = ip.t2, u1 = ip.two_mode_t1, u2 = ip.two_mode_t2;

  const GateSequence eq3 = compile_quad_x(t1, t2);
  const Matrix quad = restricted_matrix(make_gate(GateKind::quad_x, t1 * t2), work1, sub1);
  const Matrix eq3_m = restricted_matrix(eq3, work1, sub1);

  const double t = t1 * t2;
  double eq10 = 0.0;
  if (t > 0.0) {
    const SqueezerPlan sq = compile_squeezer(r_from_t(t), SplitStrategy::fixed_t1(t1));
    eq10 = deviation(restricted_matrix(sq.sequence, work1, sub1),
                     restricted_matrix(make_gate(GateKind::squeeze, sq.r), work1, sub1));
    m.plan["eq10"] = plan_report(sq);
  } else {
    eq10 = deviation(restricted_matrix(GateSequence{}, work1, sub1), Matrix::Identity(sub1.total(), sub1.total()));
  }

  const GateSequence eq15 = compile_cross_x2x(u1, u2);
  const GateSequence eq16 = compile_cross_p2x(u1, u2);
  const Matrix x2x = restricted_matrix(make_gate(GateKind::cross_x2x, u1 * u2), work2, sub2);
  const Matrix p2x = restricted_matrix(make_gate(GateKind::cross_p2x, u1 * u2), work2, sub2);

  m.headline = {{"deviation_eq3", deviation(eq3_m, quad)},
                {"deviation_eq10", eq10},
                {"deviation_eq15", deviation(restricted_matrix(eq15, work2, sub2), x2x)},
                {"deviation_eq16", deviation(restricted_matrix(eq16, work2, sub2), p2x)}};

  // The same sequences with a -t1^3 t2 / 6 global phase, and the two-mode
  // ones without the meter-mode cubic correction.
  const GateSequence eq3_sixth(eq3.gates(), -t1 * t1 * t1 * t2 / 6.0);
  auto drop_last = [](const GateSequence& s) {
    std::vector<GateSpec> g = s.gates();
    g.pop_back();
    return GateSequence(std::move(g), s.global_phase());
  };
  m.diagnostics = {
      {"tolerance", ip.tolerance},
      {"global_phase_eq3", eq3.global_phase()},
      {"deviation_eq3_sixth_phase", deviation(restricted_matrix(eq3_sixth, work1, sub1), quad)},
      {"deviation_eq15_without_meter_correction", deviation(restricted_matrix(drop_last(eq15), work2, sub2), x2x)},
      {"deviation_eq16_without_meter_correction", deviation(restricted_matrix(drop_last(eq16), work2, sub2), p2x)},
      {"frames", {f1, f2}},
      {"compared_levels", {sub1[0], sub2[0]}},
  };
  m.plan["eq3"] = {{"t1", t1}, {"t2", t2}, {"global_phase", eq3.global_phase()}};
  m.plan["eq15"] = {{"t1", u1}, {"t2", u2}};
  m.sequence = eq3;
}

inline void measure_trotter(const ExperimentConfig& cfg, const TrotterParams& tp, double scale, Measurement& m) {
  const Index d0 = cutoff_at(cfg, 0, scale), d1 = cutoff_at(cfg, 1, scale);
  m.cutoffs = {d0, d1};
  StateSpec probe = tp.probe, meter = tp.meter;
  probe.cutoff = d0;
  meter.cutoff = d1;
  const FockVector in = tensor(make_state(probe), make_state(meter));
  Json per_order = Json::object();
  for (int order : tp.orders) {
    double err[2];
    const double thetas[2] = {tp.theta, 0.5 * tp.theta};
    for (int k = 0; k < 2; ++k) {
      const CouplerPlan plan = compile_number_coupler(thetas[k], thetas[k], order, tp.split);
      const FockVector out = apply(plan.sequence, in, &m.report, cfg.tolerances.leakage);
      const FockVector direct = apply_gate(make_gate(GateKind::number_coupler, thetas[k]), in);
      err[k] = trace_distance(out, direct);
      if (k == 0 && order == tp.orders.front()) m.sequence = plan.sequence;
    }
    const std::string o = "order" + std::to_string(order);
    m.headline.emplace_back("error_" + o + "_theta", err[0]);
    m.headline.emplace_back("error_" + o + "_half", err[1]);
    m.headline.emplace_back("ratio_" + o, err[0] / err[1]);
    per_order[o] = {{"expected_ratio", std::pow(2.0, order + 1)}};
  }
  m.plan = {{"theta", tp.theta}, {"split", split_report(tp.split)}, {"orders", per_order}};
}

inline void measure_resolvability(const ResolvabilityParams& rp, Measurement& m) {
  Table t;
  t.header = {"theta", "db", "r", "rule", "d", "overlap", "satisfied", "threshold_theta", "required_repetitions"};
  for (ShiftRule rule : {ShiftRule::eq13, ShiftRule::paper_d})
    for (double db : rp.dbs)
      for (double theta : rp.thetas) {
        const double r = db_to_r(db);
        const Resolvability res = resolvability(theta, r, rule);
        const double thr = resolvability_threshold_theta(r, rule);
        t.rows.push_back({format_double(theta), format_double(db), format_double(r), std::string(to_string(rule)),
                          format_double(res.d), format_double(res.overlap), res.satisfied ? "true" : "false",
                          format_double(thr), std::to_string(static_cast<long>(std::ceil(thr / rp.theta_step)))});
      }
  m.table = std::move(t);
  const double r10 = db_to_r(10.0);
  for (ShiftRule rule : {ShiftRule::paper_d, ShiftRule::eq13}) {
    const std::string s(to_string(rule));
    const double thr = resolvability_threshold_theta(r10, rule);
    m.headline.emplace_back("threshold_theta_10db_" + s, thr);
    m.headline.emplace_back("required_repetitions_10db_" + s, std::ceil(thr / rp.theta_step));
    m.headline.emplace_back("required_db_theta_step_" + s, r_to_db(required_squeezing_r(rp.theta_step, rule)));
  }
  m.headline.emplace_back("threshold_theta_r1.15_paper_d", resolvability_threshold_theta(1.15, ShiftRule::paper_d));
  m.plan = {{"theta_step", rp.theta_step}, {"resolvable_product", resolvable_product()}};
}

}  // namespace detail

/// Evaluates the experiment once; `scale` multiplies the configured cutoffs.
/// Throws TruncationUnsafe with `out` holding the partial record.
inline void measure(const ExperimentConfig& cfg, double scale, Measurement& out) {
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SqueezingParams>) detail::measure_squeezing(cfg, p, scale, out);
        else if constexpr (std::is_same_v<P, PhotonCountingParams>) detail::measure_photon_counting(cfg, p, scale, out);
        else if constexpr (std::is_same_v<P, IdentityParams>) detail::measure_identities(cfg, p, scale, out);
        else if constexpr (std::is_same_v<P, TrotterParams>) detail::measure_trotter(cfg, p, scale, out);
        else detail::measure_resolvability(p, out);
      },
      cfg.params);
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.tolerances.convergence > 0.0) || !(cfg.tolerances.leakage > 0.0))
    throw ConfigError("tolerances must be positive");
  if (!(cfg.refine_factor > 1.0)) throw ConfigError("refine_factor must exceed 1");
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.name = cfg.name;
  res.kind = cfg.kind();
  res.convergence_tolerance = cfg.tolerances.convergence;

  Measurement base;
  try {
    measure(cfg, 1.0, base);
  } catch (const TruncationUnsafe& e) {
    res.truncation_unsafe = true;
    res.error = e.what();
    res.leakage = base.report.leakage;
    res.cutoffs = base.cutoffs;
    res.plan = base.plan;
    res.sequence = base.sequence;
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }
  res.cutoffs = base.cutoffs;
  res.headline = base.headline;
  res.plan = base.plan;
  res.diagnostics = base.diagnostics;
  res.leakage = base.report.leakage;
  res.sequence = base.sequence;
  res.table = base.table;

  Measurement refined;
  try {
    measure(cfg, cfg.refine_factor, refined);
    res.refined_cutoffs = refined.cutoffs;
    for (const auto& [k, v] : base.headline) {
      double rv = std::nan("");
      for (const auto& [rk, rval] : refined.headline)
        if (rk == k) rv = rval;
      const double delta = std::abs(v - rv);
      res.convergence.emplace_back(k, ConvergenceEntry{v, rv, delta, delta <= cfg.tolerances.convergence});
    }
  } catch (const TruncationUnsafe& e) {
    res.diagnostics["refined_run_error"] = e.what();
    for (const auto& [k, v] : base.headline)
      res.convergence.emplace_back(k, ConvergenceEntry{v, std::nan(""), std::nan(""), false});
  }
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

namespace detail {

inline ExperimentResult run_kind(const ExperimentConfig& cfg, ExperimentKind want) {
  if (cfg.kind() != want)
    throw ConfigError("experiment '" + cfg.name + "' has kind " + std::string(to_string(cfg.kind())) + ", expected " +
                      std::string(to_string(want)));
  return run_experiment(cfg);
}

}  // namespace detail

inline ExperimentResult run_squeezing(const ExperimentConfig& cfg) {
  return detail::run_kind(cfg, ExperimentKind::squeezing);
}
inline ExperimentResult run_photon_counting(const ExperimentConfig& cfg) {
  return detail::run_kind(cfg, ExperimentKind::photon_counting);
}
inline ExperimentResult run_identity_check(const ExperimentConfig& cfg) {
  return detail::run_kind(cfg, ExperimentKind::identity_check);
}
inline ExperimentResult run_trotter_order(const ExperimentConfig& cfg) {
  return detail::run_kind(cfg, ExperimentKind::trotter_order);
}
inline ExperimentResult run_resolvability_table(const ExperimentConfig& cfg) {
  return detail::run_kind(cfg, ExperimentKind::resolvability_table);
}

}  // namespace cvq
