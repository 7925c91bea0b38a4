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

// Primitive gates of the cubic-phase toolbox and ordered gate sequences.
//
// Every gate is exp(i * parameter * G) for a Hermitian generator G built from
// the truncated quadratures:
//
//   shift_x         G = X                 shift_p   G = P
//   phase           G = a^dag a           squeeze   G = -i(a^2 - a^dag^2)/2
//   cubic_x         G = X^3               cubic_p   G = P^3
//   quad_x          G = X^2
//   cross_px        G = P_a X_b           cross_xx  G = X_a X_b
//   cross_x2x       G = X_a^2 X_b         cross_p2x G = P_a^2 X_b
//   number_coupler  G = (X_a^2 + P_a^2) X_b
//
// so squeeze(r) = exp(r (a^2 - a^dag^2) / 2). Two-mode kinds act with the
// first factor on modes[0] and the second on modes[1].
//
// Powers of X and P are taken as functions of the truncated X and P, so every
// X-type gate shares the eigenbasis of the truncated X (and likewise for P).
//
// A GateSequence is an operator product: gates()[0] is the leftmost factor and
// is applied LAST. U = exp(i * global_phase) * g[0] * g[1] * ... * g[n-1].

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "cvq/fock_core.hpp"

namespace cvq {

enum class GateKind {
  shift_x,
  shift_p,
  phase,
  squeeze,
  cubic_x,
  cubic_p,
  quad_x,
  cross_px,
  cross_xx,
  cross_x2x,
  cross_p2x,
  number_coupler,
};

inline constexpr GateKind kAllGateKinds[] = {
    GateKind::shift_x,  GateKind::shift_p,  GateKind::phase,     GateKind::squeeze,
    GateKind::cubic_x,  GateKind::cubic_p,  GateKind::quad_x,    GateKind::cross_px,
    GateKind::cross_xx, GateKind::cross_x2x, GateKind::cross_p2x, GateKind::number_coupler,
};

inline constexpr bool is_two_mode(GateKind kind) {
  switch (kind) {
    case GateKind::cross_px:
    case GateKind::cross_xx:
    case GateKind::cross_x2x:
    case GateKind::cross_p2x:
    case GateKind::number_coupler:
      return true;
    default:
      return false;
  }
}

inline std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::shift_x: return "shift_x";
    case GateKind::shift_p: return "shift_p";
    case GateKind::phase: return "phase";
    case GateKind::squeeze: return "squeeze";
    case GateKind::cubic_x: return "cubic_x";
    case GateKind::cubic_p: return "cubic_p";
    case GateKind::quad_x: return "quad_x";
    case GateKind::cross_px: return "cross_px";
    case GateKind::cross_xx: return "cross_xx";
    case GateKind::cross_x2x: return "cross_x2x";
    case GateKind::cross_p2x: return "cross_p2x";
    case GateKind::number_coupler: return "number_coupler";
  }
  return "unknown";
}

inline GateKind parse_gate_kind(std::string_view name) {
  for (GateKind k : kAllGateKinds)
    if (to_string(k) == name) return k;
  throw ContractViolation("unknown gate kind '" + std::string(name) + "'");
}

struct GateSpec {
  GateKind kind;
  double parameter;
  std::vector<int> modes;

  friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

inline GateSpec make_gate(GateKind kind, double parameter, int mode = 0) {
  if (is_two_mode(kind)) return {kind, parameter, {mode, 1 - mode}};
  return {kind, parameter, {mode}};
}

inline GateSpec make_gate(GateKind kind, double parameter, int first, int second) {
  return {kind, parameter, {first, second}};
}

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

class GateSequence {
 public:
  GateSequence() = default;
  explicit GateSequence(std::vector<GateSpec> gates, double global_phase = 0.0)
      : gates_(std::move(gates)), global_phase_(wrap_phase(global_phase)) {}

  const std::vector<GateSpec>& gates() const noexcept { return gates_; }
  double global_phase() const noexcept { return global_phase_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  GateSequence with_phase(double extra) const { return GateSequence(gates_, global_phase_ + extra); }

  /// Operator product: rhs is applied first.
  friend GateSequence operator*(const GateSequence& lhs, const GateSequence& rhs) {
    std::vector<GateSpec> g = lhs.gates_;
    g.insert(g.end(), rhs.gates_.begin(), rhs.gates_.end());
    return GateSequence(std::move(g), lhs.global_phase_ + rhs.global_phase_);
  }

  friend bool operator==(const GateSequence&, const GateSequence&) = default;

 private:
  std::vector<GateSpec> gates_;
  double global_phase_ = 0.0;
};

/// Eigendecompositions of the truncated single-mode generators.
struct QuadratureBasis {
  Index cutoff;
  HermitianEigen x;
  HermitianEigen p;
  HermitianEigen squeeze;
  RealVector oscillator;  // diagonal of X^2 + P^2
};

namespace detail {

inline std::shared_ptr<const QuadratureBasis> build_basis(Index cutoff) {
  const Quadratures q = build_quadratures(cutoff);
  const Matrix a = annihilation_matrix(cutoff);
  const Matrix ad = a.adjoint();
  const Matrix sq = Complex(0.0, -0.5) * (a * a - ad * ad);
  auto basis = std::make_shared<QuadratureBasis>();
  basis->cutoff = cutoff;
  basis->x = eigen_hermitian(q.x.entries());
  basis->p = eigen_hermitian(q.p.entries());
  basis->squeeze = eigen_hermitian(0.5 * (sq + sq.adjoint()));
  const Matrix osc = q.x.entries() * q.x.entries() + q.p.entries() * q.p.entries();
  basis->oscillator = osc.diagonal().real();
  return basis;
}

}  // namespace detail

/// Cached per cutoff; the cache is observationally identical to recomputation.
inline std::shared_ptr<const QuadratureBasis> quadrature_basis(Index cutoff) {
  require_cutoff(cutoff);
  static std::shared_mutex mutex;
  static std::map<Index, std::shared_ptr<const QuadratureBasis>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(cutoff); it != cache.end()) return it->second;
  }
  auto basis = detail::build_basis(cutoff);
  std::unique_lock lock(mutex);
  return cache.emplace(cutoff, std::move(basis)).first->second;
}

/// One tensor factor of a gate generator in diagonal form: V diag(values) V^dag.
struct GeneratorFactor {
  Matrix vectors;
  RealVector values;
};

namespace detail {

inline GeneratorFactor factor_from(const HermitianEigen& eig, int power) {
  RealVector v = eig.values;
  for (Index k = 0; k < v.size(); ++k) v(k) = std::pow(eig.values(k), power);
  return {eig.vectors, std::move(v)};
}

inline GeneratorFactor diagonal_factor(RealVector values) {
  const Index d = values.size();
  return {Matrix::Identity(d, d), std::move(values)};
}

inline GeneratorFactor first_factor(GateKind kind, Index cutoff) {
  const auto b = quadrature_basis(cutoff);
  switch (kind) {
    case GateKind::shift_x: return factor_from(b->x, 1);
    case GateKind::shift_p: return factor_from(b->p, 1);
    case GateKind::phase: return diagonal_factor(RealVector::LinSpaced(cutoff, 0.0, static_cast<double>(cutoff - 1)));
    case GateKind::squeeze: return factor_from(b->squeeze, 1);
    case GateKind::cubic_x: return factor_from(b->x, 3);
    case GateKind::cubic_p: return factor_from(b->p, 3);
    case GateKind::quad_x: return factor_from(b->x, 2);
    case GateKind::cross_px: return factor_from(b->p, 1);
    case GateKind::cross_xx: return factor_from(b->x, 1);
    case GateKind::cross_x2x: return factor_from(b->x, 2);
    case GateKind::cross_p2x: return factor_from(b->p, 2);
    case GateKind::number_coupler: return diagonal_factor(b->oscillator);
  }
  throw ContractViolation("unknown gate kind");
}

inline GeneratorFactor second_factor(Index cutoff) { return factor_from(quadrature_basis(cutoff)->x, 1); }

inline Matrix local_unitary(const GeneratorFactor& f, double parameter) {
  Vector ph(f.values.size());
  for (Index k = 0; k < ph.size(); ++k) ph(k) = std::polar(1.0, parameter * f.values(k));
  return f.vectors * ph.asDiagonal() * f.vectors.adjoint();
}

// exp(i t g0_i g1_j) on the joint eigenbasis.
inline RowMajorMatrix joint_phases(const GeneratorFactor& f0, const GeneratorFactor& f1, double t) {
  RowMajorMatrix phi(f0.values.size(), f1.values.size());
  for (Index i = 0; i < phi.rows(); ++i)
    for (Index j = 0; j < phi.cols(); ++j) phi(i, j) = std::polar(1.0, t * f0.values(i) * f1.values(j));
  return phi;
}

inline void validate(const GateSpec& spec, const Dims& dims) {
  if (!std::isfinite(spec.parameter))
    throw ContractViolation("gate " + std::string(to_string(spec.kind)) + ": non-finite parameter");
  const std::size_t want = is_two_mode(spec.kind) ? 2 : 1;
  if (spec.modes.size() != want)
    throw ContractViolation("gate " + std::string(to_string(spec.kind)) + ": expected " +
                            std::to_string(want) + " mode index(es)");
  for (int m : spec.modes)
    if (m < 0 || m >= dims.modes())
      throw DimensionError("gate " + std::string(to_string(spec.kind)) + ": mode " + std::to_string(m) +
                           " out of range for dims " + dims.to_string());
  if (want == 2 && spec.modes[0] == spec.modes[1])
    throw ContractViolation("gate " + std::string(to_string(spec.kind)) + ": modes must differ");
}

// Factors ordered by physical mode (mode 0 first).
inline std::pair<GeneratorFactor, GeneratorFactor> two_mode_factors(const GateSpec& spec, const Dims& dims) {
  GeneratorFactor a = first_factor(spec.kind, dims[spec.modes[0]]);
  GeneratorFactor b = second_factor(dims[spec.modes[1]]);
  if (spec.modes[0] == 0) return {std::move(a), std::move(b)};
  return {std::move(b), std::move(a)};
}

}  // namespace detail

/// Dense unitary of one gate on the given one- or two-mode space.
inline ModeOperator gate_matrix(const GateSpec& spec, const Dims& dims) {
  detail::validate(spec, dims);
  if (!is_two_mode(spec.kind)) {
    const int m = spec.modes[0];
    const Matrix u = detail::local_unitary(detail::first_factor(spec.kind, dims[m]), spec.parameter);
    if (dims.modes() == 1) return ModeOperator(u, dims);
    return embed(ModeOperator(u, Dims{dims[m]}), m, dims);
  }
  const auto [f0, f1] = detail::two_mode_factors(spec, dims);
  const Matrix w = kron(f0.vectors, f1.vectors);
  const RowMajorMatrix phi = detail::joint_phases(f0, f1, spec.parameter);
  const Vector diag = Eigen::Map<const Vector>(phi.data(), phi.size());
  return ModeOperator(w * diag.asDiagonal() * w.adjoint(), dims);
}

inline ModeOperator gate_matrix(const GateSpec& spec, std::initializer_list<Index> cutoffs) {
  return gate_matrix(spec, Dims(cutoffs));
}

namespace detail {

/// A gate with its unitary factors built once for repeated application.
class PreparedGate {
 public:
  PreparedGate(const GateSpec& spec, const Dims& dims) : dims_(dims) {
    validate(spec, dims);
    if (!is_two_mode(spec.kind)) {
      mode_ = spec.modes[0];
      local_ = local_unitary(first_factor(spec.kind, dims[mode_]), spec.parameter);
      return;
    }
    if (dims.modes() != 2) throw DimensionError("two-mode gate applied to a single-mode state");
    auto [f0, f1] = two_mode_factors(spec, dims);
    phases_ = joint_phases(f0, f1, spec.parameter);
    w0_ = std::move(f0.vectors);
    w1_ = std::move(f1.vectors);
    two_mode_ = true;
  }

  Vector apply(const Vector& amps) const {
    if (!two_mode_) {
      if (dims_.modes() == 1) return local_ * amps;
      const auto psi = Eigen::Map<const RowMajorMatrix>(amps.data(), dims_[0], dims_[1]);
      const RowMajorMatrix out = mode_ == 0 ? RowMajorMatrix(local_ * psi) : RowMajorMatrix(psi * local_.transpose());
      return Eigen::Map<const Vector>(out.data(), out.size());
    }
    const auto psi = Eigen::Map<const RowMajorMatrix>(amps.data(), dims_[0], dims_[1]);
    // (W0 (x) W1)^dag vec(psi) <-> W0^dag psi conj(W1)
    RowMajorMatrix rotated = w0_.adjoint() * psi * w1_.conjugate();
    rotated = rotated.cwiseProduct(phases_);
    const RowMajorMatrix out = w0_ * rotated * w1_.transpose();
    return Eigen::Map<const Vector>(out.data(), out.size());
  }

 private:
  Dims dims_;
  bool two_mode_ = false;
  int mode_ = 0;
  Matrix local_;
  Matrix w0_, w1_;
  RowMajorMatrix phases_;
};

inline Vector apply_gate_raw(const GateSpec& spec, const Vector& amps, const Dims& dims) {
  return PreparedGate(spec, dims).apply(amps);
}

}  // namespace detail

inline FockVector apply_gate(const GateSpec& spec, const FockVector& state) {
  return FockVector(detail::apply_gate_raw(spec, state.amplitudes(), state.dims()), state.dims());
}

/// Per-step record of the leakage guard.
struct ApplyReport {
  std::vector<double> leakage;
};

/// Applies the sequence (rightmost gate first) and the global phase. Checks the
/// leakage guard after every gate and throws TruncationUnsafe when it trips;
/// `report`, when given, holds the leakage of every completed step.
inline FockVector apply(const GateSequence& sequence, const FockVector& state, ApplyReport* report = nullptr,
                        double leakage_threshold = kLeakageThreshold) {
  Vector amps = state.amplitudes();
  const auto& gates = sequence.gates();
  int step = 0;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it, ++step) {
    amps = detail::apply_gate_raw(*it, amps, state.dims());
    FockVector current(amps, state.dims());
    const double leak = top_band_probability(current);
    if (report) report->leakage.push_back(leak);
    if (leak > leakage_threshold)
      throw TruncationUnsafe("truncation-unsafe: leakage " + std::to_string(leak) + " after step " +
                                 std::to_string(step) + " (" + std::string(to_string(it->kind)) +
                                 ") at dims " + state.dims().to_string(),
                             step, leak);
  }
  amps *= std::polar(1.0, sequence.global_phase());
  return FockVector(std::move(amps), state.dims());
}

/// Dense product exp(i phase) g[0] g[1] ... g[n-1].
inline ModeOperator sequence_matrix(const GateSequence& sequence, const Dims& dims) {
  Matrix u = Matrix::Identity(dims.total(), dims.total());
  for (const GateSpec& g : sequence.gates()) u = u * gate_matrix(g, dims).entries();
  u *= std::polar(1.0, sequence.global_phase());
  return ModeOperator(std::move(u), dims);
}

/// The sequence evaluated in a `working` space and compressed onto the
/// low-energy `frame` (frame[m] <= working[m]). Rows and columns are indexed
/// in the frame's flattening. No leakage guard is applied.
inline Matrix restricted_matrix(const GateSequence& sequence, const Dims& working, const Dims& frame) {
  if (working.modes() != frame.modes()) throw DimensionError("restricted_matrix: mode count mismatch");
  for (int m = 0; m < frame.modes(); ++m)
    if (frame[m] > working[m]) throw DimensionError("restricted_matrix: frame exceeds working space");
  auto to_working = [&](Index f) {
    if (frame.modes() == 1) return f;
    return (f / frame[1]) * working[1] + f % frame[1];
  };
  const Index n = frame.total();
  Matrix out(n, n);
  const Complex phase = std::polar(1.0, sequence.global_phase());
  std::vector<detail::PreparedGate> prepared;
  for (auto it = sequence.gates().rbegin(); it != sequence.gates().rend(); ++it) prepared.emplace_back(*it, working);
  for (Index col = 0; col < n; ++col) {
    Vector amps = Vector::Zero(working.total());
    amps(to_working(col)) = 1.0;
    for (const auto& g : prepared) amps = g.apply(amps);
    for (Index row = 0; row < n; ++row) out(row, col) = phase * amps(to_working(row));
  }
  return out;
}

inline Matrix restricted_matrix(const GateSpec& gate, const Dims& working, const Dims& frame) {
  return restricted_matrix(GateSequence({gate}), working, frame);
}

}  // namespace cvq
