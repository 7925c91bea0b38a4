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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvq/assembly.hpp"
#include "cvq/checks.hpp"
#include "cvq/config_io.hpp"
#include "generators.hpp"

#ifndef CVQ_SOURCE_DIR
#error "CVQ_SOURCE_DIR must point at the source tree"
#endif

namespace cvq {
namespace {

using testing::Gen;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cvq_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Assembly, FormatIsReadable) {
  const GateSequence seq({make_gate(GateKind::shift_p, 0.5), make_gate(GateKind::cross_xx, -1.0, 1, 0)}, 0.25);
  const std::string text = serialize(seq);
  EXPECT_NE(text.find("shift_p 0.5 0\n"), std::string::npos);
  EXPECT_NE(text.find("cross_xx -1 1 0\n"), std::string::npos);
  EXPECT_NE(text.find("global_phase 0.25\n"), std::string::npos);
}

TEST(Assembly, PropertyRoundTripIsExact) {
  Gen g(101);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GateSpec> gates;
    const int n = g.integer(0, 12);
    for (int k = 0; k < n; ++k) {
      const GateKind kind = kAllGateKinds[g.integer(0, 11)];
      const double param = g.uniform(-1.0, 1.0) * std::pow(10.0, g.integer(-12, 4));
      gates.push_back(make_gate(kind, param, g.integer(0, 1)));
    }
    const GateSequence seq(gates, g.uniform(-10.0, 10.0));
    EXPECT_EQ(parse_sequence(serialize(seq)), seq);
  }
}

TEST(Assembly, CompiledPlansRoundTrip) {
  const GateSequence s = compile_squeezer(1.15).sequence;
  EXPECT_EQ(parse_sequence(serialize(s)), s);
  const GateSequence c = compile_number_coupler(1.4, 0.1, 2).sequence;
  EXPECT_EQ(parse_sequence(serialize(c)), c);
}

TEST(Assembly, CommentsAndBlankLinesIgnored) {
  const GateSequence s = parse_sequence("# header\n\nphase 1.5 0   # trailing\n  \nglobal_phase -0.5\n# done\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.gates()[0].kind, GateKind::phase);
  EXPECT_DOUBLE_EQ(s.global_phase(), -0.5);
}

TEST(Assembly, MalformedInputRejected) {
  EXPECT_THROW(parse_sequence("phase 1 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("global_phase 0\nphase 1 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("teleport 1 0\nglobal_phase 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("phase 1\nglobal_phase 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("cross_xx 1 0\nglobal_phase 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("phase one 0\nglobal_phase 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("phase 1 x\nglobal_phase 0\n"), ConfigError);
  EXPECT_THROW(parse_sequence("global_phase\n"), ConfigError);
  EXPECT_THROW(parse_sequence(""), ConfigError);
}

TEST(Config, PresetsRoundTripThroughJson) {
  for (const auto& name : preset_names()) {
    const ExperimentConfig cfg = preset(name);
    const Json j = to_json(cfg);
    EXPECT_EQ(to_json(config_from_json(j)), j) << name;
    EXPECT_EQ(to_json(parse_config(j.dump())), j) << name;
  }
}

TEST(Config, ShippedFilesMatchPresets) {
  const fs::path dir = fs::path(CVQ_SOURCE_DIR) / "configs";
  for (const auto& name : preset_names()) {
    const fs::path file = dir / (name + ".json");
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(to_json(load_config(file)), to_json(preset(name))) << name;
    EXPECT_EQ(to_json(resolve_config(file.string())), to_json(preset(name)));
  }
}

TEST(Config, MinimalDocumentTakesDefaults) {
  const ExperimentConfig cfg = parse_config(R"({"schema_version": 1, "kind": "photon_counting", "cutoffs": [48, 96]})");
  EXPECT_EQ(cfg.name, "photon_counting");
  EXPECT_EQ(cfg.kind(), ExperimentKind::photon_counting);
  const auto& pp = std::get<PhotonCountingParams>(cfg.params);
  EXPECT_EQ(pp.repetitions, 14);
  EXPECT_DOUBLE_EQ(pp.theta_step, 0.1);
  EXPECT_DOUBLE_EQ(cfg.refine_factor, 1.5);
}

TEST(Config, StateSpecsParse) {
  const ExperimentConfig cfg = parse_config(R"({"schema_version": 1, "kind": "trotter_order", "cutoffs": [24, 24],
      "params": {"probe": {"kind": "coherent", "alpha": [0.5, -0.25]},
                 "meter": {"kind": "cubic_phase_mff", "t": 0.1, "r": 0.3, "c": 0.2}}})");
  const auto& tp = std::get<TrotterParams>(cfg.params);
  EXPECT_EQ(tp.probe.kind, StateKind::coherent);
  EXPECT_EQ(tp.probe.alpha, Complex(0.5, -0.25));
  EXPECT_EQ(tp.meter.kind, StateKind::cubic_phase_mff);
  EXPECT_DOUBLE_EQ(tp.meter.c, 0.2);
  EXPECT_EQ(state_from_json(to_json(tp.meter)), tp.meter);
  EXPECT_EQ(state_from_json(to_json(tp.probe)), tp.probe);
}

TEST(Config, InvalidDocumentsRejected) {
  const char* bad[] = {
      "not json",
      R"({"kind": "squeezing", "cutoffs": [64]})",
      R"({"schema_version": 2, "kind": "squeezing", "cutoffs": [64]})",
      R"({"schema_version": 1, "cutoffs": [64]})",
      R"({"schema_version": 1, "kind": "teleportation"})",
      R"({"schema_version": 1, "kind": "squeezing", "cutoffs": [4]})",
      R"({"schema_version": 1, "kind": "squeezing", "cutoffs": [64], "colour": "blue"})",
      R"({"schema_version": 1, "kind": "squeezing", "cutoffs": [64], "params": {"dB": 3}})",
      R"({"schema_version": 1, "kind": "squeezing", "cutoffs": [64], "params": {"db": "ten"}})",
      R"({"schema_version": 1, "kind": "squeezing", "cutoffs": [64], "params": {"r": "one"}})",
      R"({"schema_version": 1, "kind": "squeezing", "cutoffs": [64], "tolerances": {"convergence": -1}})",
      R"({"schema_version": 1, "kind": "squeezing", "params": {"split": {"strategy": "fixed_t2"}}})",
      R"({"schema_version": 1, "kind": "squeezing", "params": {"split": {"strategy": "zigzag", "value": 1}}})",
      R"({"schema_version": 1, "kind": 7})",
      R"({"schema_version": 1, "kind": "trotter_order", "params": {"probe": {"kind": "thermal"}}})",
      R"({"schema_version": 1, "kind": "trotter_order", "params": {"probe": {"kind": "coherent", "alpha": "big"}}})",
  };
  for (const char* doc : bad) EXPECT_THROW(parse_config(doc), ConfigError) << doc;
}

TEST(Config, UnreadableFileAndUnknownPreset) {
  EXPECT_THROW(load_config("/nonexistent/cvq.json"), ConfigError);
  EXPECT_THROW(resolve_config("no_such_preset"), ConfigError);
  EXPECT_THROW(preset("no_such_preset"), ConfigError);
}

TEST(Config, EnvironmentOverridesCutoffs) {
  ExperimentConfig cfg = preset("photon_counting_paper");
  ::setenv("CVQ_CUTOFFS", "32", 1);
  apply_env_overrides(cfg);
  EXPECT_EQ(cfg.cutoffs, (std::vector<Index>{32, 32}));
  ::setenv("CVQ_CUTOFFS", "20,40", 1);
  apply_env_overrides(cfg);
  EXPECT_EQ(cfg.cutoffs, (std::vector<Index>{20, 40}));
  ::setenv("CVQ_CUTOFFS", "20,40,60", 1);
  EXPECT_THROW(apply_env_overrides(cfg), ConfigError);
  ::setenv("CVQ_CUTOFFS", "4", 1);
  EXPECT_THROW(apply_env_overrides(cfg), ConfigError);
  ::setenv("CVQ_CUTOFFS", "abc", 1);
  EXPECT_THROW(apply_env_overrides(cfg), ConfigError);
  ::unsetenv("CVQ_CUTOFFS");
  ExperimentConfig untouched = preset("squeezing_3db");
  apply_env_overrides(untouched);
  EXPECT_EQ(untouched.cutoffs, std::vector<Index>{64});
}

TEST(Results, WrittenAtomicallyWithSequenceAndTable) {
  const fs::path dir = scratch_dir("results");
  const ExperimentResult sq = run_experiment(preset("squeezing_3db"));
  const auto paths = write_result(sq, dir);
  ASSERT_EQ(paths.size(), 2u);
  const Json j = Json::parse(slurp(dir / "squeezing_3db.result.json"));
  for (const char* key : {"schema_version", "name", "kind", "cutoffs", "refined_cutoffs", "headline", "convergence",
                          "plan", "diagnostics", "leakage", "truncation_unsafe", "wall_time_s"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["headline"].size(), j["convergence"]["metrics"].size());
  EXPECT_EQ(parse_sequence(slurp(dir / "squeezing_3db.sequence.txt")), *sq.sequence);

  const ExperimentResult table = run_experiment(preset("resolvability_table"));
  write_result(table, dir);
  EXPECT_EQ(slurp(dir / "resolvability_table.csv"), table.table->to_csv());
  for (const auto& entry : fs::directory_iterator(dir)) EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(Results, TruncationUnsafeRecordKeepsError) {
  ExperimentConfig cfg = preset("photon_counting_paper");
  cfg.cutoffs = {16, 24};
  const Json j = to_json(run_experiment(cfg));
  EXPECT_TRUE(j["truncation_unsafe"].get<bool>());
  EXPECT_TRUE(j.contains("error"));
  EXPECT_FALSE(j["convergence"]["converged"].get<bool>());
}

TEST(Checks, ScalarSuitePasses) {
  const auto outcomes = run_check_suite("scalars");
  ASSERT_FALSE(outcomes.empty());
  for (const auto& o : outcomes) EXPECT_TRUE(o.passed) << o.name << ": " << o.detail;
  EXPECT_THROW(run_check_suite("astrology"), ConfigError);
}

TEST(Checks, HookCanForceFailure) {
  const auto outcomes = run_check_suite("trotter", [](ExperimentConfig& c) {
    std::get<TrotterParams>(c.params).orders = {2, 1};
    c.tolerances.convergence = 1e-15;
  });
  bool any_failed = false;
  for (const auto& o : outcomes) any_failed |= !o.passed;
  EXPECT_TRUE(any_failed);
}

}  // namespace
}  // namespace cvq
