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

// cvq: compile gate plans, run experiments, check tolerances, tabulate
// resolvability thresholds.
//
// Exit status: 0 ok, 1 check failure or tolerance breach, 2 config error,
// 3 truncation unsafe.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvq/checks.hpp"
#include "cvq/config_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBreach = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTruncation = 3;

struct CompileArgs {
  std::string target = "squeeze";
  std::optional<double> db;
  std::optional<double> r;
  std::string split = "balanced";
  std::optional<double> split_value;
  std::optional<double> t1;
  std::optional<double> t2;
  double theta_total = 1.4;
  double theta_step = 0.1;
  int order = 1;
  std::string out;
};

struct RunArgs {
  std::vector<std::string> configs;
  std::string out = "results";
};

struct TableArgs {
  std::vector<double> thetas;
  std::vector<double> dbs;
  double theta_step = 0.1;
  std::string out;
};

cvq::SplitStrategy make_split(const std::string& kind, const std::optional<double>& value) {
  const cvq::SplitKind k = cvq::parse_split_kind(kind);
  if (k != cvq::SplitKind::balanced && !value) throw cvq::ConfigError("--split " + kind + " needs --split-value");
  return {k, value.value_or(0.0)};
}

void emit(const std::string& out_dir, const std::string& stem, const cvq::Json& report, const cvq::GateSequence& seq) {
  if (out_dir.empty()) {
    std::cout << report.dump(2) << "\n" << cvq::serialize(seq);
    return;
  }
  const std::filesystem::path dir(out_dir);
  cvq::write_file_atomic(dir / (stem + ".plan.json"), report.dump(2) + "\n");
  cvq::write_file_atomic(dir / (stem + ".sequence.txt"), cvq::serialize(seq));
  std::cout << "wrote " << (dir / (stem + ".plan.json")).string() << " and " << (dir / (stem + ".sequence.txt")).string()
            << "\n";
}

int do_compile(const CompileArgs& a) {
  const cvq::SplitStrategy split = make_split(a.split, a.split_value);
  cvq::Json report;
  report["target"] = a.target;
  if (a.target == "squeeze") {
    if (a.db.has_value() == a.r.has_value()) throw cvq::ConfigError("compile squeeze: give exactly one of --db, --r");
    const double r = a.r ? *a.r : cvq::db_to_r(*a.db);
    const cvq::SqueezerPlan plan = cvq::compile_squeezer(r, split);
    report["plan"] = cvq::plan_report(plan);
    report["plan"]["split"] = cvq::to_json(split);
    emit(a.out, "squeeze", report, plan.sequence);
  } else if (a.target == "coupler") {
    const cvq::CouplerPlan plan = cvq::compile_number_coupler(a.theta_total, a.theta_step, a.order, split);
    report["plan"] = cvq::plan_report(plan);
    report["plan"]["split"] = cvq::to_json(split);
    emit(a.out, "coupler", report, plan.sequence);
  } else if (a.target == "quad_x" || a.target == "cross_x2x" || a.target == "cross_p2x") {
    if (!a.t1 || !a.t2) throw cvq::ConfigError("compile " + a.target + ": --t1 and --t2 are required");
    const cvq::GateSequence seq = a.target == "quad_x"      ? cvq::compile_quad_x(*a.t1, *a.t2)
                                  : a.target == "cross_x2x" ? cvq::compile_cross_x2x(*a.t1, *a.t2)
                                                            : cvq::compile_cross_p2x(*a.t1, *a.t2);
    report["t1"] = *a.t1;
    report["t2"] = *a.t2;
    report["gates"] = seq.size();
    report["global_phase"] = seq.global_phase();
    emit(a.out, a.target, report, seq);
  } else {
    throw cvq::ConfigError("unknown compile target '" + a.target + "'");
  }
  return kExitOk;
}

int do_run(const RunArgs& a, int verbosity) {
  std::vector<cvq::ExperimentConfig> configs;
  for (const auto& ref : a.configs) {
    cvq::ExperimentConfig cfg = cvq::resolve_config(ref);
    cvq::apply_env_overrides(cfg);
    configs.push_back(std::move(cfg));
  }
  std::vector<std::future<cvq::ExperimentResult>> jobs;
  for (const auto& cfg : configs)
    jobs.push_back(std::async(configs.size() > 1 ? std::launch::async : std::launch::deferred,
                              [cfg] { return cvq::run_experiment(cfg); }));

  bool truncation = false;
  bool breach = false;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const cvq::ExperimentResult r = jobs[i].get();
    const std::filesystem::path dir = configs[i].output.empty() ? std::filesystem::path(a.out) : std::filesystem::path(configs[i].output);
    const auto paths = cvq::write_result(r, dir);
    std::cout << r.name << ":";
    for (const auto& [k, v] : r.headline) std::cout << " " << k << "=" << cvq::format_double(v);
    std::cout << "\n";
    if (verbosity > 0)
      for (const auto& p : paths) std::cout << "  wrote " << p.string() << "\n";
    if (r.truncation_unsafe) {
      std::cerr << "truncation-unsafe: " << r.name << ": " << r.error << "\n";
      truncation = true;
    } else if (!r.converged()) {
      std::cerr << "tolerance breach: " << r.name << ": headline metrics not converged at refined cutoffs\n";
      breach = true;
    }
  }
  if (truncation) return kExitTruncation;
  return breach ? kExitBreach : kExitOk;
}

int do_check(const std::string& suite, int verbosity) {
  const auto outcomes = cvq::run_check_suite(suite, [](cvq::ExperimentConfig& c) { cvq::apply_env_overrides(c); });
  int failed = 0;
  for (const auto& o : outcomes) {
    if (!o.passed) ++failed;
    if (!o.passed || verbosity > 0) std::cout << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.detail << "\n";
  }
  std::cout << outcomes.size() - failed << "/" << outcomes.size() << " checks passed\n";
  if (failed) std::cerr << "tolerance breach: " << failed << " check(s) failed in suite '" << suite << "'\n";
  return failed ? kExitBreach : kExitOk;
}

int do_table(const TableArgs& a) {
  cvq::ExperimentConfig cfg = cvq::preset("resolvability_table");
  auto& rp = std::get<cvq::ResolvabilityParams>(cfg.params);
  if (!a.thetas.empty()) rp.thetas = a.thetas;
  if (!a.dbs.empty()) rp.dbs = a.dbs;
  rp.theta_step = a.theta_step;
  const cvq::ExperimentResult r = cvq::run_experiment(cfg);
  if (a.out.empty()) {
    std::cout << r.table->to_csv();
  } else {
    for (const auto& p : cvq::write_result(r, a.out)) std::cout << "wrote " << p.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvq: continuous-variable gate compiler and Fock-space simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More output (repeatable)");

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a target unitary into cubic and Gaussian gates");
  compile->add_option("--target", ca.target, "squeeze | quad_x | cross_x2x | cross_p2x | coupler")
      ->check(CLI::IsMember({"squeeze", "quad_x", "cross_x2x", "cross_p2x", "coupler"}));
  compile->add_option("--db", ca.db, "Squeezing in dB");
  compile->add_option("--r", ca.r, "Squeezing parameter r");
  compile->add_option("--split", ca.split, "balanced | fixed_t1 | fixed_t2");
  compile->add_option("--split-value", ca.split_value, "Fixed factor for fixed_t1 / fixed_t2");
  compile->add_option("--t1", ca.t1, "Displacement factor");
  compile->add_option("--t2", ca.t2, "Cubic factor");
  compile->add_option("--theta-total", ca.theta_total, "Coupler total angle");
  compile->add_option("--theta-step", ca.theta_step, "Coupler step angle");
  compile->add_option("--order", ca.order, "Splitting order (1 or 2)");
  compile->add_option("--out", ca.out, "Output directory (default: stdout)");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run experiments from config files or preset names");
  run->add_option("--config", ra.configs, "Config file or preset name (repeatable)")->required();
  run->add_option("--out", ra.out, "Output directory");

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "Run a pass/fail check suite");
  std::vector<std::string> suites = cvq::check_suite_names();
  suites.push_back("all");
  check->add_option("--suite", suite, "Suite name")->check(CLI::IsMember(suites));

  TableArgs ta;
  auto* table = app.add_subcommand("table", "Tabulate resolvability thresholds");
  table->add_option("--thetas", ta.thetas, "Coupling angles");
  table->add_option("--dbs", ta.dbs, "Squeezing levels in dB");
  table->add_option("--theta-step", ta.theta_step, "Step angle for repetition counts");
  table->add_option("--out", ta.out, "Output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*compile) return do_compile(ca);
    if (*run) return do_run(ra, verbosity);
    if (*check) return do_check(suite, verbosity);
    if (*table) return do_table(ta);
  } catch (const cvq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cvq::TruncationUnsafe& e) {
    std::cerr << "truncation-unsafe: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const cvq::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cvq::ContractViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBreach;
  }
  return kExitOk;
}
