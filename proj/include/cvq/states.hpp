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

// Constructors for the states used by the squeezing and photon-counting
// experiments. Squeezing parameters are in nepers; dB conversion lives in the
// compiler.

#include <string>
#include <string_view>

#include "cvq/fock_core.hpp"
#include "cvq/gates.hpp"

namespace cvq {

enum class StateKind {
  vacuum,
  fock,
  coherent,
  squeezed_vacuum,
  p_eigenstate_approx,
  displaced_squeezed,
  cubic_phase_mff,
};

inline std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::vacuum: return "vacuum";
    case StateKind::fock: return "fock";
    case StateKind::coherent: return "coherent";
    case StateKind::squeezed_vacuum: return "squeezed_vacuum";
    case StateKind::p_eigenstate_approx: return "p_eigenstate_approx";
    case StateKind::displaced_squeezed: return "displaced_squeezed";
    case StateKind::cubic_phase_mff: return "cubic_phase_mff";
  }
  return "unknown";
}

inline StateKind parse_state_kind(std::string_view name) {
  for (StateKind k : {StateKind::vacuum, StateKind::fock, StateKind::coherent, StateKind::squeezed_vacuum,
                      StateKind::p_eigenstate_approx, StateKind::displaced_squeezed, StateKind::cubic_phase_mff})
    if (to_string(k) == name) return k;
  throw ContractViolation("unknown state kind '" + std::string(name) + "'");
}

/// Declarative single-mode state. Fields not used by `kind` are ignored.
///   fock: n      coherent: alpha      squeezed_vacuum / p_eigenstate_approx: r
///   displaced_squeezed: r, alpha      cubic_phase_mff: t, r, c
struct StateSpec {
  StateKind kind = StateKind::vacuum;
  Index cutoff = 0;
  int n = 0;
  Complex alpha{0.0, 0.0};
  double r = 0.0;
  double c = 0.0;
  double t = 0.0;

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

namespace detail {

inline FockVector guarded(Vector amps, Index cutoff, std::string_view what) {
  FockVector state = FockVector::normalized(std::move(amps), Dims{cutoff});
  const double leak = top_band_probability(state);
  if (leak > kLeakageThreshold)
    throw TruncationUnsafe("truncation-unsafe: " + std::string(what) + " leaks " + std::to_string(leak) +
                               " into the top levels at cutoff " + std::to_string(cutoff),
                           -1, leak);
  return state;
}

inline void require_finite(std::initializer_list<double> values, std::string_view what) {
  for (double v : values)
    if (!std::isfinite(v)) throw ContractViolation(std::string(what) + ": non-finite parameter");
}

}  // namespace detail

inline FockVector vacuum(Index cutoff) {
  require_cutoff(cutoff);
  Vector amps = Vector::Zero(cutoff);
  amps(0) = 1.0;
  return FockVector(std::move(amps), Dims{cutoff});
}

inline FockVector fock_state(int n, Index cutoff) {
  require_cutoff(cutoff);
  if (n < 0 || n >= cutoff)
    throw DomainError("fock_state: n=" + std::to_string(n) + " out of range for cutoff " + std::to_string(cutoff));
  Vector amps = Vector::Zero(cutoff);
  amps(n) = 1.0;
  return FockVector(std::move(amps), Dims{cutoff});
}

/// a|alpha> = alpha|alpha>, so <X> = Re(alpha) and <P> = Im(alpha).
inline FockVector coherent_state(Complex alpha, Index cutoff) {
  require_cutoff(cutoff);
  detail::require_finite({alpha.real(), alpha.imag()}, "coherent_state");
  Vector amps(cutoff);
  amps(0) = std::exp(-0.5 * std::norm(alpha));
  for (Index n = 1; n < cutoff; ++n) amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return detail::guarded(std::move(amps), cutoff, "coherent state");
}

/// exp(r (a^2 - a^dag^2)/2)|0>: X-variance e^{-2r}/4 for r > 0.
inline FockVector squeezed_vacuum(double r, Index cutoff) {
  require_cutoff(cutoff);
  detail::require_finite({r}, "squeezed_vacuum");
  const double th = std::tanh(r);
  Vector amps = Vector::Zero(cutoff);
  amps(0) = 1.0 / std::sqrt(std::cosh(r));
  for (Index n = 2; n < cutoff; n += 2) {
    const double ratio = std::sqrt(static_cast<double>(n) * static_cast<double>(n - 1)) / static_cast<double>(n);
    amps(n) = amps(n - 2) * (-th) * ratio;
  }
  return detail::guarded(std::move(amps), cutoff, "squeezed vacuum");
}

/// P-squeezed vacuum with P-variance e^{-2r}/4; approximates |p = 0>.
inline FockVector p_eigenstate_approx(double r, Index cutoff) { return squeezed_vacuum(-r, cutoff); }

/// p_eigenstate_approx(r) displaced so that <P> = shift.
inline FockVector displaced_p_eigenstate(double r, double shift, Index cutoff) {
  detail::require_finite({r, shift}, "displaced_p_eigenstate");
  const FockVector base = p_eigenstate_approx(r, cutoff);
  if (shift == 0.0) return base;
  // exp(i c X) moves <P> by c/2.
  return apply(GateSequence({make_gate(GateKind::shift_x, 2.0 * shift)}), base);
}

/// D(alpha) S(r)|0>, up to global phase.
inline FockVector displaced_squeezed(double r, Complex alpha, Index cutoff) {
  detail::require_finite({r, alpha.real(), alpha.imag()}, "displaced_squeezed");
  // exp(i t P) moves <X> by -t/2; exp(i t X) moves <P> by t/2.
  const GateSequence d({make_gate(GateKind::shift_x, 2.0 * alpha.imag()),
                        make_gate(GateKind::shift_p, -2.0 * alpha.real())});
  return apply(d, squeezed_vacuum(r, cutoff));
}

/// Cubic gate exp(i t X^3) applied to a squeezed vacuum centred at x = c.
inline FockVector cubic_phase_mff(double t, double r, double c, Index cutoff) {
  detail::require_finite({t, r, c}, "cubic_phase_mff");
  const GateSequence seq({make_gate(GateKind::cubic_x, t), make_gate(GateKind::shift_p, -2.0 * c)});
  return apply(seq, squeezed_vacuum(r, cutoff));
}

inline FockVector make_state(const StateSpec& spec) {
  switch (spec.kind) {
    case StateKind::vacuum: return vacuum(spec.cutoff);
    case StateKind::fock: return fock_state(spec.n, spec.cutoff);
    case StateKind::coherent: return coherent_state(spec.alpha, spec.cutoff);
    case StateKind::squeezed_vacuum: return squeezed_vacuum(spec.r, spec.cutoff);
    case StateKind::p_eigenstate_approx: return p_eigenstate_approx(spec.r, spec.cutoff);
    case StateKind::displaced_squeezed: return displaced_squeezed(spec.r, spec.alpha, spec.cutoff);
    case StateKind::cubic_phase_mff: return cubic_phase_mff(spec.t, spec.r, spec.c, spec.cutoff);
  }
  throw ContractViolation("make_state: unknown kind");
}

/// |a> (x) |b>, mode-0 major.
inline FockVector tensor(const FockVector& a, const FockVector& b) {
  if (a.modes() != 1 || b.modes() != 1) throw DimensionError("tensor: single-mode factors required");
  Vector amps(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) amps.segment(i * b.size(), b.size()) = a[i] * b.amplitudes();
  return FockVector::normalized(std::move(amps), Dims{a.size(), b.size()});
}

}  // namespace cvq
