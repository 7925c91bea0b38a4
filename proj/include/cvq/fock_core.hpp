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

// Truncated Fock-basis substrate: ladder and quadrature operators, unitary
// synthesis from Hermitian generators, and state metrics.
//
// Conventions: hbar = 1/2, X = (a^dag + a)/2, P = i(a^dag - a)/2, so that
// [X, P] = i/2 and the vacuum has quadrature variance 1/4.
//
// Two-mode amplitudes are flattened mode-0 major: the amplitude of
// |n0>|n1> lives at index n0 * d1 + n1.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "cvq/errors.hpp"

namespace cvq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kDensityTolerance = 1e-9;
inline constexpr double kPositivityTolerance = 1e-8;
inline constexpr double kLeakageThreshold = 1e-6;

/// Per-mode Fock cutoffs of a one- or two-mode space.
class Dims {
 public:
  Dims() = default;
  Dims(std::initializer_list<Index> sizes) : sizes_(sizes) { validate(); }
  explicit Dims(std::vector<Index> sizes) : sizes_(std::move(sizes)) { validate(); }

  int modes() const noexcept { return static_cast<int>(sizes_.size()); }
  Index operator[](int mode) const { return sizes_.at(static_cast<std::size_t>(mode)); }
  Index total() const noexcept {
    return std::accumulate(sizes_.begin(), sizes_.end(), Index{1}, std::multiplies<>());
  }
  const std::vector<Index>& sizes() const noexcept { return sizes_; }

  friend bool operator==(const Dims&, const Dims&) = default;

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (i) out += "x";
      out += std::to_string(sizes_[i]);
    }
    return out;
  }

 private:
  void validate() const {
    if (sizes_.empty() || sizes_.size() > 2)
      throw DimensionError("Dims: only one- and two-mode spaces are supported");
    for (Index d : sizes_)
      if (d < 1) throw DimensionError("Dims: cutoffs must be positive");
  }

  std::vector<Index> sizes_;
};

/// Pure state in the number basis. Always normalized.
class FockVector {
 public:
  FockVector(Vector amplitudes, Dims dims) : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (amplitudes_.size() != dims_.total())
      throw DimensionError("FockVector: amplitude count " + std::to_string(amplitudes_.size()) +
                           " does not match dims " + dims_.to_string());
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance)
      throw ContractViolation("FockVector: state is not normalized (norm " +
                              std::to_string(amplitudes_.norm()) + ")");
  }

  /// Rescales to unit norm before validating.
  static FockVector normalized(Vector amplitudes, Dims dims) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ContractViolation("FockVector: zero or non-finite state");
    amplitudes /= n;
    return FockVector(std::move(amplitudes), std::move(dims));
  }

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  const Dims& dims() const noexcept { return dims_; }
  int modes() const noexcept { return dims_.modes(); }
  Index size() const noexcept { return amplitudes_.size(); }
  Complex operator[](Index i) const { return amplitudes_(i); }

  /// Amplitudes of a two-mode state viewed as a d0 x d1 matrix.
  RowMajorMatrix as_matrix() const {
    if (modes() != 2) throw DimensionError("FockVector::as_matrix: two-mode state required");
    return Eigen::Map<const RowMajorMatrix>(amplitudes_.data(), dims_[0], dims_[1]);
  }

 private:
  Vector amplitudes_;
  Dims dims_;
};

class DensityMatrix;
inline DensityMatrix partial_trace_first_mode(const FockVector& state);
inline DensityMatrix partial_trace_first_mode(const DensityMatrix& state);

/// Mixed state: Hermitian, unit trace, numerically positive.
class DensityMatrix {
 public:
  DensityMatrix(Matrix entries, Dims dims) : entries_(std::move(entries)), dims_(std::move(dims)) {
    if (entries_.rows() != dims_.total() || entries_.cols() != dims_.total())
      throw DimensionError("DensityMatrix: shape does not match dims " + dims_.to_string());
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance)
      throw ContractViolation("DensityMatrix: not Hermitian");
    if (std::abs(entries_.trace() - Complex(1.0)) > kDensityTolerance)
      throw ContractViolation("DensityMatrix: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTolerance)
      throw ContractViolation("DensityMatrix: negative eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()));
  }

  /// Rank-1 projector |psi><psi|.
  static DensityMatrix from_pure(const FockVector& psi) {
    return DensityMatrix(Trusted{}, psi.amplitudes() * psi.amplitudes().adjoint(), psi.dims());
  }

  const Matrix& entries() const noexcept { return entries_; }
  const Dims& dims() const noexcept { return dims_; }
  Index cutoff() const noexcept { return dims_.total(); }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, Matrix entries, Dims dims) : entries_(std::move(entries)), dims_(std::move(dims)) {}

  friend DensityMatrix partial_trace_first_mode(const FockVector& state);
  friend DensityMatrix partial_trace_first_mode(const DensityMatrix& state);

  Matrix entries_;
  Dims dims_;
};

/// Square operator on a truncated one- or two-mode space.
class ModeOperator {
 public:
  ModeOperator(Matrix entries, Dims dims, bool hermitian = false)
      : entries_(std::move(entries)), dims_(std::move(dims)), hermitian_(hermitian) {
    if (entries_.rows() != dims_.total() || entries_.cols() != dims_.total())
      throw DimensionError("ModeOperator: shape does not match dims " + dims_.to_string());
    if (hermitian_ && (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
      throw ContractViolation("ModeOperator: flagged Hermitian but entries are not");
  }

  const Matrix& entries() const noexcept { return entries_; }
  const Dims& dims() const noexcept { return dims_; }
  bool hermitian() const noexcept { return hermitian_; }
  Index cutoff() const noexcept { return dims_.total(); }

  ModeOperator adjoint() const { return ModeOperator(entries_.adjoint(), dims_, hermitian_); }

 private:
  Matrix entries_;
  Dims dims_;
  bool hermitian_;
};

struct Ladder {
  ModeOperator annihilation;
  ModeOperator creation;
};

struct Quadratures {
  ModeOperator x;
  ModeOperator p;
};

inline void require_cutoff(Index cutoff) {
  if (cutoff < 2) throw DimensionError("cutoff must be at least 2, got " + std::to_string(cutoff));
}

inline Matrix annihilation_matrix(Index cutoff) {
  require_cutoff(cutoff);
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (Index n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Ladder build_ladder(Index cutoff) {
  Matrix a = annihilation_matrix(cutoff);
  Matrix ad = a.adjoint();
  return {ModeOperator(std::move(a), Dims{cutoff}), ModeOperator(std::move(ad), Dims{cutoff})};
}

inline Quadratures build_quadratures(Index cutoff) {
  const Matrix a = annihilation_matrix(cutoff);
  const Matrix ad = a.adjoint();
  const Complex i(0.0, 1.0);
  return {ModeOperator(0.5 * (ad + a), Dims{cutoff}, true),
          ModeOperator(0.5 * i * (ad - a), Dims{cutoff}, true)};
}

inline ModeOperator number_operator(Index cutoff) {
  require_cutoff(cutoff);
  Matrix n = Matrix::Zero(cutoff, cutoff);
  for (Index k = 0; k < cutoff; ++k) n(k, k) = static_cast<double>(k);
  return ModeOperator(std::move(n), Dims{cutoff}, true);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ModeOperator kron(const ModeOperator& a, const ModeOperator& b) {
  if (a.dims().modes() != 1 || b.dims().modes() != 1)
    throw DimensionError("kron: single-mode factors required");
  return ModeOperator(kron(a.entries(), b.entries()), Dims{a.cutoff(), b.cutoff()},
                      a.hermitian() && b.hermitian());
}

/// Lifts a single-mode operator onto `mode` of a two-mode space.
inline ModeOperator embed(const ModeOperator& op, int mode, const Dims& dims) {
  if (op.dims().modes() != 1) throw DimensionError("embed: single-mode operator required");
  if (dims.modes() == 1) {
    if (mode != 0 || dims[0] != op.cutoff()) throw DimensionError("embed: mode/cutoff mismatch");
    return op;
  }
  if (mode < 0 || mode > 1 || dims[mode] != op.cutoff()) throw DimensionError("embed: mode/cutoff mismatch");
  const Matrix other = Matrix::Identity(dims[1 - mode], dims[1 - mode]);
  Matrix m = mode == 0 ? kron(op.entries(), other) : kron(other, op.entries());
  return ModeOperator(std::move(m), dims, op.hermitian());
}

/// H = vectors * diag(values) * vectors^dag.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};

inline HermitianEigen eigen_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw Error("eigen_hermitian: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// V diag(exp(i * scale * f(lambda))) V^dag, with f applied to each eigenvalue.
template <typename Fn>
Matrix unitary_from_eigen(const HermitianEigen& eig, double scale, Fn&& f) {
  const Index d = eig.values.size();
  Vector phases(d);
  for (Index k = 0; k < d; ++k) phases(k) = std::polar(1.0, scale * f(eig.values(k)));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

inline Matrix unitary_from_eigen(const HermitianEigen& eig, double scale) {
  return unitary_from_eigen(eig, scale, [](double v) { return v; });
}

/// exp(i * scale * generator) via eigendecomposition of the Hermitian generator.
inline ModeOperator synthesize_unitary(const ModeOperator& generator, double scale) {
  if (!generator.hermitian())
    throw ContractViolation("synthesize_unitary: generator must be flagged Hermitian");
  if (!std::isfinite(scale)) throw ContractViolation("synthesize_unitary: non-finite scale");
  return ModeOperator(unitary_from_eigen(eigen_hermitian(generator.entries()), scale), generator.dims());
}

/// max |(U^dag U - I)_ij|
inline double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

inline DensityMatrix to_density(const FockVector& psi) { return DensityMatrix::from_pure(psi); }

/// Tr(AB). Not the Uhlmann fidelity for two mixed states.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims() != b.dims())
    throw DimensionError("fidelity: dims " + a.dims().to_string() + " vs " + b.dims().to_string());
  // Tr(AB) = sum_ij A_ij B_ji
  return (a.entries().cwiseProduct(b.entries().transpose())).sum().real();
}

inline double fidelity(const FockVector& a, const FockVector& b) {
  if (a.dims() != b.dims())
    throw DimensionError("fidelity: dims " + a.dims().to_string() + " vs " + b.dims().to_string());
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

inline double fidelity(const DensityMatrix& a, const FockVector& b) {
  if (a.dims() != b.dims())
    throw DimensionError("fidelity: dims " + a.dims().to_string() + " vs " + b.dims().to_string());
  return b.amplitudes().dot(a.entries() * b.amplitudes()).real();
}

inline double fidelity(const FockVector& a, const DensityMatrix& b) { return fidelity(b, a); }

/// Trace norm of |a><a| - |b><b|, i.e. 2 sqrt(1 - |<a|b>|^2), evaluated
/// without cancellation for nearly equal states.
inline double trace_distance(const FockVector& a, const FockVector& b) {
  if (a.dims() != b.dims()) throw DimensionError("trace_distance: dims mismatch");
  const Complex ov = a.amplitudes().dot(b.amplitudes());
  const double mag = std::abs(ov);
  const Complex align = mag > 0.0 ? ov / mag : Complex(1.0);
  const double gap = (b.amplitudes() - align * a.amplitudes()).squaredNorm();  // 2 - 2|ov|
  const double infid = std::max(0.0, 0.5 * gap * (1.0 + mag));
  return 2.0 * std::sqrt(infid);
}

inline DensityMatrix partial_trace_first_mode(const FockVector& state) {
  if (state.modes() != 2) throw DimensionError("partial_trace_first_mode: two-mode state required");
  const RowMajorMatrix psi = state.as_matrix();
  // rho_jk = sum_i psi_ij conj(psi_ik)
  Matrix rho = psi.transpose() * psi.conjugate();
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(rho), Dims{state.dims()[1]});
}

inline DensityMatrix partial_trace_first_mode(const DensityMatrix& state) {
  const Dims& dims = state.dims();
  if (dims.modes() != 2) throw DimensionError("partial_trace_first_mode: two-mode state required");
  const Index d0 = dims[0], d1 = dims[1];
  Matrix rho = Matrix::Zero(d1, d1);
  for (Index i = 0; i < d0; ++i) rho += state.entries().block(i * d1, i * d1, d1, d1);
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(rho), Dims{d1});
}

/// Photon-number distribution of one mode (marginal for two-mode states).
inline RealVector mode_populations(const FockVector& state, int mode = 0) {
  const Dims& dims = state.dims();
  if (mode < 0 || mode >= dims.modes()) throw DimensionError("mode_populations: no such mode");
  if (dims.modes() == 1) return state.amplitudes().cwiseAbs2();
  const RowMajorMatrix psi = state.as_matrix();
  if (mode == 0) return psi.cwiseAbs2().rowwise().sum();
  return psi.cwiseAbs2().colwise().sum().transpose();
}

/// Largest probability found in the top 10% of Fock levels of any mode.
inline double top_band_probability(const FockVector& state) {
  double worst = 0.0;
  for (int m = 0; m < state.modes(); ++m) {
    const RealVector pop = mode_populations(state, m);
    const Index d = pop.size();
    const Index band = std::max<Index>(1, (d + 9) / 10);
    worst = std::max(worst, pop.tail(band).sum());
  }
  return worst;
}

struct QuadratureStats {
  double mean;
  double variance;
};

inline QuadratureStats quadrature_statistics(const FockVector& state, const ModeOperator& q) {
  if (state.dims() != q.dims()) throw DimensionError("quadrature_statistics: dims mismatch");
  const Vector qpsi = q.entries() * state.amplitudes();
  const double mean = state.amplitudes().dot(qpsi).real();
  const double second = qpsi.squaredNorm();  // <Q^2> for Hermitian Q
  return {mean, second - mean * mean};
}

inline QuadratureStats quadrature_statistics(const DensityMatrix& state, const ModeOperator& q) {
  if (state.dims() != q.dims()) throw DimensionError("quadrature_statistics: dims mismatch");
  const Matrix rq = state.entries() * q.entries();
  const double mean = rq.trace().real();
  const double second = (rq * q.entries()).trace().real();
  return {mean, second - mean * mean};
}

/// max |A_ij - B_ij| over the leading `levels` x `levels` block.
inline double max_deviation(const Matrix& a, const Matrix& b, Index levels) {
  levels = std::min({levels, a.rows(), b.rows()});
  return (a.topLeftCorner(levels, levels) - b.topLeftCorner(levels, levels)).cwiseAbs().maxCoeff();
}

}  // namespace cvq
