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

// Lowering of quadratic and cross-Kerr-style interactions onto cubic phase
// gates plus Gaussian operations, and the scalar relations that parametrize
// them.
//
// Conjugating a cubic gate with a displacement gives
//
//   exp(i t1 P) exp(i a X^3) exp(-i t1 P) = exp(i a (X + t1/2)^3)
//
// and (X + h)^3 - (X - h)^3 = 6 h X^2 + 2 h^3. With a = t2/3, h = t1/2 the
// two conjugated cubic gates combine to exp(i t1 t2 X^2) exp(i t1^3 t2 / 12).
// The constant becomes the operator (t1^3 t2 / 12) X_b^3 in the two-mode
// versions, which is cancelled by an explicit cubic gate on the meter mode.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvq/errors.hpp"
#include "cvq/gates.hpp"

namespace cvq {

// ---------------------------------------------------------------- scalars --

inline double db_to_r(double db) { return db * std::log(10.0) / 20.0; }
inline double r_to_db(double r) { return r * 20.0 / std::log(10.0); }

/// t = sqrt(4 tanh^2 r / (1 - tanh^2 r)), evaluated as 2 sinh r.
inline double t_from_r(double r) {
  if (!(r >= 0.0)) throw DomainError("t_from_r: r must be non-negative");
  return 2.0 * std::sinh(r);
}

/// Inverse of t_from_r: tanh r = sqrt(t^2 / (4 + t^2)), evaluated as asinh(t/2).
inline double r_from_t(double t) {
  if (!(t >= 0.0)) throw DomainError("r_from_t: t must be non-negative");
  return std::asinh(0.5 * t);
}

struct BlochMessiahPhases {
  double phi1;
  double phi2;
};

inline BlochMessiahPhases bloch_messiah_phases(double t) {
  const double half = -0.5 * std::atan(t / 2.0);
  return {half - kPi / 4.0, half + kPi / 4.0};
}

// ------------------------------------------------------------------ split --

enum class SplitKind { balanced, fixed_t1, fixed_t2 };

/// How a product t = t1 * t2 is divided between displacement (t1) and cubic
/// strength (t2). Negative products keep t1 >= 0 under the balanced split.
struct SplitStrategy {
  SplitKind kind = SplitKind::balanced;
  double value = 0.0;  // the fixed factor for fixed_t1 / fixed_t2

  static SplitStrategy balanced() { return {SplitKind::balanced, 0.0}; }
  static SplitStrategy fixed_t1(double t1) { return {SplitKind::fixed_t1, t1}; }
  static SplitStrategy fixed_t2(double t2) { return {SplitKind::fixed_t2, t2}; }

  friend bool operator==(const SplitStrategy&, const SplitStrategy&) = default;
};

inline std::string_view to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::balanced: return "balanced";
    case SplitKind::fixed_t1: return "fixed_t1";
    case SplitKind::fixed_t2: return "fixed_t2";
  }
  return "unknown";
}

inline SplitKind parse_split_kind(std::string_view name) {
  for (SplitKind k : {SplitKind::balanced, SplitKind::fixed_t1, SplitKind::fixed_t2})
    if (to_string(k) == name) return k;
  throw ContractViolation("unknown split strategy '" + std::string(name) + "'");
}

struct SplitFactors {
  double t1;
  double t2;
};

inline SplitFactors split_product(double t, const SplitStrategy& split) {
  switch (split.kind) {
    case SplitKind::balanced: {
      const double s = std::sqrt(std::abs(t));
      return {s, t < 0.0 ? -s : s};
    }
    case SplitKind::fixed_t1:
      if (split.value == 0.0) throw DomainError("split: fixed t1 must be non-zero");
      return {split.value, t / split.value};
    case SplitKind::fixed_t2:
      if (split.value == 0.0) throw DomainError("split: fixed t2 must be non-zero");
      return {t / split.value, split.value};
  }
  throw DomainError("split: unknown strategy");
}

// ------------------------------------------------------------- identities --

/// exp(i t1 t2 X^2) as displacements and two cubic gates on `mode`.
inline GateSequence compile_quad_x(double t1, double t2, int mode = 0) {
  return GateSequence({make_gate(GateKind::shift_p, t1, mode), make_gate(GateKind::cubic_x, t2 / 3.0, mode),
                       make_gate(GateKind::shift_p, -2.0 * t1, mode), make_gate(GateKind::cubic_x, -t2 / 3.0, mode),
                       make_gate(GateKind::shift_p, t1, mode)},
                      -t1 * t1 * t1 * t2 / 12.0);
}

/// exp(i t1 t2 X_a^2 X_b); `a` is the probe mode and `b` the meter mode.
inline GateSequence compile_cross_x2x(double t1, double t2, int a = 0, int b = 1) {
  return GateSequence({make_gate(GateKind::cross_px, t1, a, b), make_gate(GateKind::cubic_x, t2 / 3.0, a),
                       make_gate(GateKind::cross_px, -2.0 * t1, a, b), make_gate(GateKind::cubic_x, -t2 / 3.0, a),
                       make_gate(GateKind::cross_px, t1, a, b),
                       make_gate(GateKind::cubic_x, -t1 * t1 * t1 * t2 / 12.0, b)});
}

/// exp(i t1 t2 P_a^2 X_b).
inline GateSequence compile_cross_p2x(double t1, double t2, int a = 0, int b = 1) {
  return GateSequence({make_gate(GateKind::cross_xx, -t1, a, b), make_gate(GateKind::cubic_p, t2 / 3.0, a),
                       make_gate(GateKind::cross_xx, 2.0 * t1, a, b), make_gate(GateKind::cubic_p, -t2 / 3.0, a),
                       make_gate(GateKind::cross_xx, -t1, a, b),
                       make_gate(GateKind::cubic_x, -t1 * t1 * t1 * t2 / 12.0, b)});
}

// --------------------------------------------------------------- squeezer --

struct SqueezerPlan {
  double r;
  double t;  // = t1 * t2
  double t1;
  double t2;
  double phi1;
  double phi2;
  GateSequence sequence;
};

/// exp(r (a^2 - a^dag^2)/2) = exp(-i atan(t/2)/2) R(phi2) exp(i t X^2) R(phi1)
/// with R(phi) = exp(i phi a^dag a) and t = 2 sinh r.
inline SqueezerPlan compile_squeezer(double r, const SplitStrategy& split = SplitStrategy::balanced(),
                                     int mode = 0) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("compile_squeezer: r must be positive and finite");
  const double t = t_from_r(r);
  const SplitFactors f = split_product(t, split);
  const BlochMessiahPhases ph = bloch_messiah_phases(t);
  const GateSequence seq = GateSequence({make_gate(GateKind::phase, ph.phi2, mode)}) *
                           compile_quad_x(f.t1, f.t2, mode) *
                           GateSequence({make_gate(GateKind::phase, ph.phi1, mode)}, -0.5 * std::atan(t / 2.0));
  return {r, f.t1 * f.t2, f.t1, f.t2, ph.phi1, ph.phi2, seq};
}

// ---------------------------------------------------------------- coupler --

struct CouplerBlock {
  GateKind target;  // cross_x2x or cross_p2x
  double theta;
  double t1;
  double t2;
};

struct CouplerPlan {
  double theta_total;
  double theta_step;
  int repetitions;
  int splitting_order;
  std::vector<CouplerBlock> blocks;  // one repetition, operator-product order
  GateSequence sequence;
};

/// exp(i theta (X_a^2 + P_a^2) X_b) as `repetitions` products of the
/// compiled X^2 X and P^2 X interactions. Order 1 uses
/// exp(i s X^2 X) exp(i s P^2 X); order 2 the symmetric arrangement
/// exp(i s/2 X^2 X) exp(i s P^2 X) exp(i s/2 X^2 X).
inline CouplerPlan compile_number_coupler(double theta_total, double theta_step, int order,
                                          const SplitStrategy& split = SplitStrategy::balanced(), int a = 0,
                                          int b = 1) {
  if (!std::isfinite(theta_total) || !std::isfinite(theta_step) || !(theta_step > 0.0))
    throw DomainError("compile_number_coupler: theta_step must be positive and finite");
  if (theta_total < 0.0) throw DomainError("compile_number_coupler: theta_total must be non-negative");
  if (theta_total > 0.0 && theta_step > theta_total * (1.0 + 1e-12))
    throw DomainError("compile_number_coupler: theta_step exceeds theta_total");
  if (order != 1 && order != 2) throw DomainError("compile_number_coupler: order must be 1 or 2");
  const double ratio = theta_total / theta_step;
  const double reps = std::round(ratio);
  if (std::abs(ratio - reps) > 1e-9)
    throw DomainError("compile_number_coupler: theta_total/theta_step = " + std::to_string(ratio) +
                      " is not integral");

  auto block = [&](GateKind target, double theta) {
    const SplitFactors f = split_product(theta, split);
    return CouplerBlock{target, theta, f.t1, f.t2};
  };
  std::vector<CouplerBlock> blocks;
  if (order == 1) {
    blocks = {block(GateKind::cross_x2x, theta_step), block(GateKind::cross_p2x, theta_step)};
  } else {
    blocks = {block(GateKind::cross_x2x, 0.5 * theta_step), block(GateKind::cross_p2x, theta_step),
              block(GateKind::cross_x2x, 0.5 * theta_step)};
  }
  GateSequence one;
  for (const CouplerBlock& bl : blocks)
    one = one * (bl.target == GateKind::cross_x2x ? compile_cross_x2x(bl.t1, bl.t2, a, b)
                                                  : compile_cross_p2x(bl.t1, bl.t2, a, b));
  GateSequence all;
  for (int k = 0; k < static_cast<int>(reps); ++k) all = all * one;
  return {theta_total, theta_step, static_cast<int>(reps), order, std::move(blocks), std::move(all)};
}

// ---------------------------------------------------------- resolvability --

/// Per-photon meter shift: theta/2 from the ideal coupler action, or the
/// 3 theta/4 used in the discrimination estimate.
enum class ShiftRule { eq13, paper_d };

inline std::string_view to_string(ShiftRule rule) { return rule == ShiftRule::eq13 ? "eq13" : "paper_d"; }

inline ShiftRule parse_shift_rule(std::string_view name) {
  if (name == "eq13") return ShiftRule::eq13;
  if (name == "paper_d") return ShiftRule::paper_d;
  throw ContractViolation("unknown shift rule '" + std::string(name) + "'");
}

inline double shift_per_photon(double theta, ShiftRule rule) {
  return rule == ShiftRule::eq13 ? 0.5 * theta : 0.75 * theta;
}

inline constexpr double kResolvableOverlap = 1e-2;

/// e^r d at which the amplitude overlap exp(-d^2 e^{2r} / 2) equals 1e-2.
inline double resolvable_product() { return std::sqrt(-2.0 * std::log(kResolvableOverlap)); }

/// Amplitude overlap of two P-squeezed vacua whose centres differ by d.
inline double squeezed_overlap(double d, double r) { return std::exp(-0.5 * d * d * std::exp(2.0 * r)); }

struct Resolvability {
  double d;
  double overlap;
  bool satisfied;
};

inline Resolvability resolvability(double theta, double r, ShiftRule rule) {
  if (!(theta >= 0.0) || !(r >= 0.0)) throw DomainError("resolvability: theta and r must be non-negative");
  const double d = shift_per_photon(theta, rule);
  const double ov = squeezed_overlap(d, r);
  return {d, ov, ov <= kResolvableOverlap};
}

/// Smallest interaction time that makes neighbouring photon numbers resolvable.
inline double resolvability_threshold_theta(double r, ShiftRule rule) {
  return resolvable_product() * std::exp(-r) / shift_per_photon(1.0, rule);
}

/// Smallest squeezing (nepers) that makes a given theta resolvable.
inline double required_squeezing_r(double theta, ShiftRule rule) {
  if (!(theta > 0.0)) throw DomainError("required_squeezing_r: theta must be positive");
  return std::log(resolvable_product() / shift_per_photon(theta, rule));
}

// ---------------------------------------------------------------- suzuki --

/// Principal root of c^{n+1} + (1 - c)^{n+1} = 0: c = 1 / (1 + w) with
/// w = exp(i pi / (n + 1)).
inline std::complex<double> suzuki_coefficient(int n) {
  if (n < 1) throw DomainError("suzuki_coefficient: n must be at least 1");
  const std::complex<double> w = std::polar(1.0, kPi / static_cast<double>(n + 1));
  return 1.0 / (1.0 + w);
}

}  // namespace cvq
