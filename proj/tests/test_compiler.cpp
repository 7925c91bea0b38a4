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

#include <cmath>
#include <complex>

#include "cvq/compiler.hpp"
#include "cvq/states.hpp"
#include "generators.hpp"

namespace cvq {
namespace {

using testing::Gen;

double deviation(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Scalars, DecibelConversion) {
  EXPECT_NEAR(db_to_r(10.0), 1.15129, 1e-5);
  EXPECT_EQ(db_to_r(0.0), 0.0);
  EXPECT_NEAR(r_to_db(db_to_r(32.0)), 32.0, 1e-12);
}

TEST(Scalars, SqueezingToQuadraticStrength) {
  EXPECT_NEAR(t_from_r(1.15), 2.8415, 1e-3);
  EXPECT_EQ(t_from_r(0.0), 0.0);
  EXPECT_NEAR(r_from_t(t_from_r(0.7)), 0.7, 1e-12);
  EXPECT_THROW(t_from_r(-0.1), DomainError);
  EXPECT_THROW(r_from_t(-0.1), DomainError);
}

TEST(Scalars, PropertyRoundTripsAndTanhForm) {
  Gen g(2);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = g.uniform(0.0, 5.0);
    EXPECT_NEAR(r_from_t(t_from_r(r)), r, 1e-12);
    const double th = std::tanh(r);
    EXPECT_NEAR(t_from_r(r), 2.0 * th / std::sqrt(1.0 - th * th), 1e-10 * std::max(1.0, t_from_r(r)));
    const double t = t_from_r(r);
    EXPECT_NEAR(std::tanh(r_from_t(t)), std::sqrt(t * t / (4.0 + t * t)), 1e-12);
    const double db = g.uniform(-40.0, 40.0);
    EXPECT_NEAR(r_to_db(db_to_r(db)), db, 1e-12);
  }
}

TEST(BlochMessiah, Phases) {
  const BlochMessiahPhases z = bloch_messiah_phases(0.0);
  EXPECT_NEAR(z.phi1, -kPi / 4.0, 1e-15);
  EXPECT_NEAR(z.phi2, kPi / 4.0, 1e-15);
  const BlochMessiahPhases two = bloch_messiah_phases(2.0);
  EXPECT_NEAR(two.phi1, -kPi / 8.0 - kPi / 4.0, 1e-15);
  EXPECT_NEAR(two.phi2, -kPi / 8.0 + kPi / 4.0, 1e-15);
  Gen g(4);
  for (int trial = 0; trial < 50; ++trial) {
    const BlochMessiahPhases p = bloch_messiah_phases(g.uniform(-50.0, 50.0));
    EXPECT_NEAR(p.phi2 - p.phi1, kPi / 2.0, 1e-14);
  }
}

TEST(Split, Strategies) {
  const SplitFactors b = split_product(2.25, SplitStrategy::balanced());
  EXPECT_DOUBLE_EQ(b.t1, 1.5);
  EXPECT_DOUBLE_EQ(b.t2, 1.5);
  const SplitFactors n = split_product(-4.0, SplitStrategy::balanced());
  EXPECT_DOUBLE_EQ(n.t1, 2.0);
  EXPECT_DOUBLE_EQ(n.t2, -2.0);
  const SplitFactors f1 = split_product(3.0, SplitStrategy::fixed_t1(2.0));
  EXPECT_DOUBLE_EQ(f1.t2, 1.5);
  const SplitFactors f2 = split_product(3.0, SplitStrategy::fixed_t2(0.5));
  EXPECT_DOUBLE_EQ(f2.t1, 6.0);
  EXPECT_THROW(split_product(1.0, SplitStrategy::fixed_t2(0.0)), DomainError);
  for (SplitKind k : {SplitKind::balanced, SplitKind::fixed_t1, SplitKind::fixed_t2})
    EXPECT_EQ(parse_split_kind(to_string(k)), k);
  EXPECT_ANY_THROW(parse_split_kind("greedy"));
}

TEST(QuadX, SequenceLayout) {
  const GateSequence s = compile_quad_x(0.7, 0.9);
  const std::vector<GateSpec> want{make_gate(GateKind::shift_p, 0.7), make_gate(GateKind::cubic_x, 0.3),
                                   make_gate(GateKind::shift_p, -1.4), make_gate(GateKind::cubic_x, -0.3),
                                   make_gate(GateKind::shift_p, 0.7)};
  ASSERT_EQ(s.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(s.gates()[i].kind, want[i].kind);
    EXPECT_NEAR(s.gates()[i].parameter, want[i].parameter, 1e-15);
  }
}

TEST(QuadX, ZeroParametersAreIdentity) {
  for (auto [t1, t2] : {std::pair{0.0, 0.4}, std::pair{0.4, 0.0}}) {
    const GateSequence s = compile_quad_x(t1, t2);
    EXPECT_EQ(s.global_phase(), 0.0);
    EXPECT_LT(deviation(sequence_matrix(s, Dims{16}).entries(), Matrix::Identity(16, 16)), 1e-12);
  }
}

TEST(QuadX, GlobalPhaseIsMinusT1CubedT2OverTwelve) {
  EXPECT_DOUBLE_EQ(compile_quad_x(1.0, 3.0).global_phase(), -0.25);
  // The phase that aligns the compiled product with the direct gate.
  const double t1 = 0.5, t2 = 0.4;
  const Dims work{256}, frame{32};
  const Matrix direct = restricted_matrix(make_gate(GateKind::quad_x, t1 * t2), work, frame);
  const Matrix bare = restricted_matrix(GateSequence(compile_quad_x(t1, t2).gates()), work, frame);
  const double phase = std::arg((bare.adjoint() * direct).trace());
  EXPECT_NEAR(phase, -t1 * t1 * t1 * t2 / 12.0, 1e-9);
  EXPECT_GT(std::abs(phase + t1 * t1 * t1 * t2 / 6.0), 1e-3);
}

TEST(QuadX, MatchesDirectGateOnLowHalfOfFrame) {
  const Dims work{256}, frame{64};
  const Matrix direct = restricted_matrix(make_gate(GateKind::quad_x, 0.09), work, frame);
  const Matrix compiled = restricted_matrix(compile_quad_x(0.3, 0.3), work, frame);
  EXPECT_LT(max_deviation(compiled, direct, 32), 1e-8);
}

TEST(QuadX, UnpaddedTruncationCorruptsLowLevels) {
  // Cubic gates built from the truncated X reflect off the top level, so the
  // identity only holds when the working space is larger than the frame.
  const Matrix direct = gate_matrix(make_gate(GateKind::quad_x, 0.09), {64}).entries();
  const Matrix compiled = sequence_matrix(compile_quad_x(0.3, 0.3), Dims{64}).entries();
  EXPECT_GT(max_deviation(compiled, direct, 32), 1e-3);
}

TEST(QuadX, PropertySmallParameters) {
  Gen g(6);
  const Dims work{192}, frame{64};
  for (int trial = 0; trial < 6; ++trial) {
    const double t1 = g.uniform(-0.5, 0.5), t2 = g.uniform(-0.5, 0.5);
    const Matrix direct = restricted_matrix(make_gate(GateKind::quad_x, t1 * t2), work, frame);
    const Matrix compiled = restricted_matrix(compile_quad_x(t1, t2), work, frame);
    EXPECT_LT(max_deviation(compiled, direct, 32), 1e-7) << t1 << " " << t2;
  }
}

TEST(Squeezer, FixedCubicSplitAtTenDecibels) {
  const SqueezerPlan p = compile_squeezer(1.15, SplitStrategy::fixed_t2(0.1));
  EXPECT_NEAR(p.t1, 28.416, 0.01);
  EXPECT_NEAR(compile_squeezer(db_to_r(10.0), SplitStrategy::fixed_t2(0.1)).t1, 28.4605, 1e-3);
  EXPECT_NEAR(p.t2 / 3.0, 0.0333, 1e-4);
  EXPECT_NEAR(p.t1 * p.t2, p.t, 1e-12);
}

TEST(Squeezer, BalancedSplitInvariants) {
  const SqueezerPlan p = compile_squeezer(1.15);
  EXPECT_NEAR(p.t1, 1.6857, 1e-4);
  EXPECT_DOUBLE_EQ(p.t1, p.t2);
  EXPECT_NEAR(p.t1 * p.t2, p.t, 1e-12);
  const double th = std::tanh(p.r);
  EXPECT_NEAR(p.t, 2.0 * th / std::sqrt(1.0 - th * th), 1e-10);
  EXPECT_EQ(p.sequence.size(), 7u);
}

TEST(Squeezer, VanishingSqueezing) {
  const SqueezerPlan p = compile_squeezer(1e-12);
  EXPECT_LT(std::abs(p.t), 1e-11);
  EXPECT_LT(std::abs(p.t1), 1e-5);
  EXPECT_LT(std::abs(p.t2), 1e-5);
  EXPECT_LT(deviation(sequence_matrix(p.sequence, Dims{12}).entries(), Matrix::Identity(12, 12)), 1e-9);
}

TEST(Squeezer, RejectsNonPositive) {
  EXPECT_THROW(compile_squeezer(0.0), DomainError);
  EXPECT_THROW(compile_squeezer(-0.2), DomainError);
}

TEST(Squeezer, ReproducesSqueezedVacuum) {
  for (double r : {0.1, 0.3, 0.6}) {
    const FockVector out = apply(compile_squeezer(r).sequence, vacuum(128));
    EXPECT_GE(fidelity(out, squeezed_vacuum(r, 128)), 1.0 - 1e-6) << r;
  }
}

TEST(Squeezer, MatchesSqueezeGateIncludingPhase) {
  const Dims work{256}, frame{32};
  for (double r : {0.05, 0.2}) {
    const SqueezerPlan p = compile_squeezer(r, SplitStrategy::fixed_t1(0.4));
    const Matrix direct = restricted_matrix(make_gate(GateKind::squeeze, r), work, frame);
    EXPECT_LT(max_deviation(restricted_matrix(p.sequence, work, frame), direct, 16), 1e-7) << r;
  }
}

class CrossIdentity : public ::testing::TestWithParam<GateKind> {};

GateSequence compile_cross(GateKind k, double t1, double t2) {
  return k == GateKind::cross_x2x ? compile_cross_x2x(t1, t2) : compile_cross_p2x(t1, t2);
}

TEST_P(CrossIdentity, MatchesDirectGateOnLowJointLevels) {
  const GateKind k = GetParam();
  const Dims work{64, 64}, frame{12, 12};
  const Matrix direct = restricted_matrix(make_gate(k, 0.16), work, frame);
  EXPECT_LT(deviation(restricted_matrix(compile_cross(k, 0.4, 0.4), work, frame), direct), 1e-7);
}

TEST_P(CrossIdentity, ZeroDisplacementIsIdentity) {
  const GateSequence s = compile_cross(GetParam(), 0.0, 0.7);
  EXPECT_LT(deviation(sequence_matrix(s, Dims{6, 6}).entries(), Matrix::Identity(36, 36)), 1e-12);
}

TEST_P(CrossIdentity, StateLevelFidelity) {
  const GateKind k = GetParam();
  const FockVector in = tensor(fock_state(1, 48), vacuum(48));
  const FockVector compiled = apply(compile_cross(k, 0.4, 0.4), in);
  const FockVector direct = apply_gate(make_gate(k, 0.16), in);
  EXPECT_GE(fidelity(compiled, direct), 1.0 - 1e-8);
}

TEST_P(CrossIdentity, MeterCorrectionIsRequired) {
  const GateKind k = GetParam();
  const GateSequence full = compile_cross(k, 0.5, 0.5);
  std::vector<GateSpec> gates = full.gates();
  gates.pop_back();
  const Dims work{40, 40}, frame{8, 8};
  const Matrix direct = restricted_matrix(make_gate(k, 0.25), work, frame);
  EXPECT_GT(deviation(restricted_matrix(GateSequence(gates), work, frame), direct), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Kinds, CrossIdentity, ::testing::Values(GateKind::cross_x2x, GateKind::cross_p2x),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Coupler, RepetitionCounts) {
  const CouplerPlan p = compile_number_coupler(1.4, 0.1, 1);
  EXPECT_EQ(p.repetitions, 14);
  EXPECT_NEAR(p.repetitions * p.theta_step, p.theta_total, 1e-12);
  EXPECT_EQ(p.blocks.size(), 2u);
  EXPECT_EQ(p.sequence.size(), 14u * 2u * 6u);
  EXPECT_EQ(compile_number_coupler(0.3, 0.3, 2).repetitions, 1);
  EXPECT_EQ(compile_number_coupler(0.3, 0.3, 2).blocks.size(), 3u);
  EXPECT_EQ(compile_number_coupler(0.0, 0.1, 1).repetitions, 0);
}

TEST(Coupler, RejectsBadPlans) {
  EXPECT_THROW(compile_number_coupler(1.0, 0.3, 1), DomainError);
  EXPECT_THROW(compile_number_coupler(0.1, 0.2, 1), DomainError);
  EXPECT_THROW(compile_number_coupler(1.0, 0.1, 3), DomainError);
  EXPECT_THROW(compile_number_coupler(1.0, 0.0, 1), DomainError);
  EXPECT_THROW(compile_number_coupler(-1.0, 0.1, 1), DomainError);
}

TEST(Coupler, BlockLayout) {
  const CouplerPlan p1 = compile_number_coupler(0.2, 0.2, 1, SplitStrategy::fixed_t1(0.5));
  EXPECT_EQ(p1.blocks[0].target, GateKind::cross_x2x);
  EXPECT_EQ(p1.blocks[1].target, GateKind::cross_p2x);
  EXPECT_DOUBLE_EQ(p1.blocks[0].t1, 0.5);
  EXPECT_NEAR(p1.blocks[0].t2, 0.4, 1e-15);
  const CouplerPlan p2 = compile_number_coupler(0.2, 0.2, 2);
  EXPECT_DOUBLE_EQ(p2.blocks[0].theta, 0.1);
  EXPECT_DOUBLE_EQ(p2.blocks[1].theta, 0.2);
  EXPECT_DOUBLE_EQ(p2.blocks[2].theta, 0.1);
}

double trotter_error(double theta, int order) {
  const FockVector in = tensor(fock_state(1, 24), vacuum(24));
  const FockVector compiled = apply(compile_number_coupler(theta, theta, order).sequence, in);
  const FockVector direct = apply_gate(make_gate(GateKind::number_coupler, theta), in);
  return trace_distance(compiled, direct);
}

TEST(Coupler, FirstOrderErrorHalvesQuadratically) {
  const double ratio = trotter_error(0.2, 1) / trotter_error(0.1, 1);
  EXPECT_NEAR(ratio, 4.0, 0.15 * 4.0);
}

TEST(Coupler, SecondOrderErrorHalvesCubically) {
  const double ratio = trotter_error(0.2, 2) / trotter_error(0.1, 2);
  EXPECT_NEAR(ratio, 8.0, 0.20 * 8.0);
}

TEST(Resolvability, ThresholdAtTenDecibels) {
  EXPECT_TRUE(resolvability(1.28 * 1.01, 1.15, ShiftRule::paper_d).satisfied);
  EXPECT_FALSE(resolvability(1.28 * 0.99, 1.15, ShiftRule::paper_d).satisfied);
  EXPECT_NEAR(resolvability_threshold_theta(1.15, ShiftRule::paper_d), 1.28, 0.01 * 1.28);
  EXPECT_NEAR(resolvability_threshold_theta(1.15, ShiftRule::eq13), 1.5 * 1.28, 0.01 * 1.5 * 1.28);
}

TEST(Resolvability, SmallThetaNeedsAboutThirtyTwoDecibels) {
  const double need = r_to_db(required_squeezing_r(0.1, ShiftRule::paper_d));
  EXPECT_EQ(std::round(need), 32.0);
  EXPECT_TRUE(resolvability(0.1, db_to_r(std::ceil(need)), ShiftRule::paper_d).satisfied);
  EXPECT_FALSE(resolvability(0.1, db_to_r(10.0), ShiftRule::paper_d).satisfied);
  EXPECT_FALSE(resolvability(0.1, db_to_r(10.0), ShiftRule::eq13).satisfied);
}

TEST(Resolvability, ZeroSeparation) {
  const Resolvability z = resolvability(0.0, 1.0, ShiftRule::eq13);
  EXPECT_EQ(z.d, 0.0);
  EXPECT_EQ(z.overlap, 1.0);
  EXPECT_FALSE(z.satisfied);
  EXPECT_THROW(resolvability(0.1, -1.0, ShiftRule::eq13), DomainError);
}

TEST(Resolvability, PropertyThresholdConsistency) {
  EXPECT_NEAR(resolvable_product(), 3.03485, 1e-5);
  Gen g(8);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = g.uniform(0.0, 4.0);
    EXPECT_NEAR(squeezed_overlap(3.03485 * std::exp(-r), r), 1e-2, 1e-6);
    for (ShiftRule rule : {ShiftRule::eq13, ShiftRule::paper_d}) {
      const double th = resolvability_threshold_theta(r, rule);
      EXPECT_TRUE(resolvability(th * (1.0 + 1e-9), r, rule).satisfied);
      EXPECT_FALSE(resolvability(th * (1.0 - 1e-6), r, rule).satisfied);
      EXPECT_NEAR(required_squeezing_r(th, rule), r, 1e-9);
    }
  }
  for (ShiftRule rule : {ShiftRule::eq13, ShiftRule::paper_d}) EXPECT_EQ(parse_shift_rule(to_string(rule)), rule);
}

TEST(Suzuki, FirstOrderRoot) {
  const std::complex<double> c = suzuki_coefficient(1);
  const bool either = std::abs(c - std::complex<double>(0.5, 0.5)) < 1e-15 ||
                      std::abs(c - std::complex<double>(0.5, -0.5)) < 1e-15;
  EXPECT_TRUE(either) << c;
}

TEST(Suzuki, SecondOrderRootFromQuadratic) {
  // c^3 + (1 - c)^3 = 3c^2 - 3c + 1 = 0.
  const std::complex<double> disc = std::sqrt(std::complex<double>(9.0 - 12.0, 0.0));
  const std::complex<double> r1 = (3.0 + disc) / 6.0, r2 = (3.0 - disc) / 6.0;
  const std::complex<double> c = suzuki_coefficient(2);
  EXPECT_LT(std::min(std::abs(c - r1), std::abs(c - r2)), 1e-15);
  EXPECT_NEAR(std::abs(c), 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(Suzuki, ResidualForLowOrders) {
  for (int n = 1; n <= 6; ++n) {
    const std::complex<double> c = suzuki_coefficient(n);
    EXPECT_LT(std::abs(std::pow(c, n + 1) + std::pow(1.0 - c, n + 1)), 1e-12) << n;
    EXPECT_EQ(c + (1.0 - c), std::complex<double>(1.0, 0.0));
  }
  EXPECT_THROW(suzuki_coefficient(0), DomainError);
}

}  // namespace
}  // namespace cvq
