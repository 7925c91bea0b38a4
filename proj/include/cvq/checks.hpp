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

// Named pass/fail suites over the presets, shared by `cvq check`.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cvq/config_io.hpp"

namespace cvq {

struct CheckOutcome {
  std::string name;
  bool passed;
  std::string detail;
};

using ConfigHook = std::function<void(ExperimentConfig&)>;

inline std::vector<std::string> check_suite_names() {
  return {"identities", "trotter", "scalars", "squeezing", "photon_counting", "resolvability"};
}

namespace detail {

inline CheckOutcome within(std::string name, double value, double target, double tol) {
  const bool ok = std::abs(value - target) <= tol;
  return {std::move(name), ok,
          format_double(value) + " vs " + format_double(target) + " (tolerance " + format_double(tol) + ")"};
}

inline CheckOutcome below(std::string name, double value, double limit) {
  return {std::move(name), value < limit, format_double(value) + " < " + format_double(limit)};
}

inline ExperimentResult run_preset(const std::string& name, const ConfigHook& hook) {
  ExperimentConfig cfg = preset(name);
  if (hook) hook(cfg);
  ExperimentResult r = run_experiment(cfg);
  if (r.truncation_unsafe) throw TruncationUnsafe(r.error, -1, 0.0);
  return r;
}

inline void add_convergence(std::vector<CheckOutcome>& out, const ExperimentResult& r) {
  out.push_back({r.name + ": converged at refined cutoffs", r.converged(),
                 "tolerance " + format_double(r.convergence_tolerance)});
}

}  // namespace detail

inline std::vector<CheckOutcome> run_check_suite(const std::string& suite, const ConfigHook& hook = {}) {
  std::vector<CheckOutcome> out;
  if (suite == "all") {
    for (const auto& s : check_suite_names()) {
      auto part = run_check_suite(s, hook);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (suite == "identities") {
    const ExperimentResult r = detail::run_preset("identities", hook);
    const double tol = std::get<IdentityParams>(preset("identities").params).tolerance;
    for (const char* k : {"deviation_eq3", "deviation_eq10", "deviation_eq15", "deviation_eq16"})
      out.push_back(detail::below(k, r.metric(k), tol));
    detail::add_convergence(out, r);
  } else if (suite == "trotter") {
    const ExperimentResult r = detail::run_preset("trotter_order", hook);
    out.push_back(detail::within("ratio_order1", r.metric("ratio_order1"), 4.0, 0.15 * 4.0));
    out.push_back(detail::within("ratio_order2", r.metric("ratio_order2"), 8.0, 0.20 * 8.0));
    detail::add_convergence(out, r);
  } else if (suite == "scalars") {
    out.push_back(detail::within("db_to_r(10)", db_to_r(10.0), 1.15129, 1e-5));
    out.push_back(detail::within("t_from_r(1.15)", t_from_r(1.15), 2.8415, 1e-3));
    out.push_back(detail::within("r_to_db(db_to_r(32))", r_to_db(db_to_r(32.0)), 32.0, 1e-12));
    out.push_back(detail::within("r_from_t(t_from_r(0.7))", r_from_t(t_from_r(0.7)), 0.7, 1e-12));
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
      const auto c = suzuki_coefficient(n);
      worst = std::max(worst, std::abs(std::pow(c, n + 1) + std::pow(1.0 - c, n + 1)));
    }
    out.push_back(detail::below("suzuki residual n=1..6", worst, 1e-12));
  } else if (suite == "squeezing") {
    const ExperimentResult r = detail::run_preset("squeezing_10db", hook);
    out.push_back(detail::within("achieved_db", r.metric("achieved_db"), 10.0, 0.3));
    out.push_back({"fidelity >= 0.99", r.metric("fidelity") >= 0.99, format_double(r.metric("fidelity"))});
    detail::add_convergence(out, r);
    const SplitFactors f = split_product(t_from_r(1.15), SplitStrategy::fixed_t2(0.1));
    out.push_back(detail::within("t1*t2 at t2=0.1", 28.416 * 0.1, t_from_r(1.15), 0.01));
    out.push_back(detail::within("t1 at t2=0.1", f.t1, 28.416, 0.01));
    out.push_back(detail::within("cubic strength t2/3", f.t2 / 3.0, 0.0333, 1e-4));
  } else if (suite == "photon_counting") {
    const ExperimentResult r = detail::run_preset("photon_counting_paper", hook);
    out.push_back(detail::within("fidelity_n1", r.metric("fidelity_n1"), 0.0085, 0.02));
    out.push_back(detail::within("fidelity_n2", r.metric("fidelity_n2"), 0.9886, 0.02));
    out.push_back(detail::within("fidelity_n3", r.metric("fidelity_n3"), 0.0080, 0.02));
    detail::add_convergence(out, r);
  } else if (suite == "resolvability") {
    const double thr = resolvability_threshold_theta(1.15, ShiftRule::paper_d);
    out.push_back(detail::within("threshold theta at r=1.15 (paper_d)", thr, 1.28, 0.01 * 1.28));
    out.push_back(detail::within("overlap at e^r d = 3.03485", squeezed_overlap(3.03485, 0.0), 1e-2, 1e-6));
  } else {
    throw ConfigError("unknown check suite '" + suite + "'");
  }
  return out;
}

}  // namespace cvq
