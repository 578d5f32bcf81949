#pragma once

// Galerkin discretization of ((-Delta_g)^s + V) u = f in the truncated
// eigenbasis.  The operator matrix is diag(lambda_k^s) + M_V with
// M_V[j,k] = sum_p w_p V_p phi_j(x_p) phi_k(x_p); it is assembled once,
// factorized, and shared by all solves.

#include "specfrac/fractional.hpp"
#include "specfrac/spectrum.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace specfrac {

// Nonnegative potential sampled on the grid.
template <typename Scalar>
class Potential {
 public:
  explicit Potential(Field<Scalar> field) : field_(std::move(field)) {
    if ((field_.values().array() < Scalar(0)).any())
      throw std::invalid_argument("Potential: samples must be nonnegative");
  }

  const Field<Scalar>& field() const { return field_; }
  const VectorX<Scalar>& values() const { return field_.values(); }

  // Treated as identically zero below this threshold; the operator is then
  // singular on constants and solves require mean-zero data.
  bool is_zero() const { return (field_.values().array() < Scalar(1e-14)).all(); }

 private:
  Field<Scalar> field_;
};

template <typename Scalar>
class OperatorMatrix {
 public:
  OperatorMatrix(SpectrumPtr<Scalar> spectrum, Potential<Scalar> potential, FracParam<Scalar> s,
                 MatrixX<Scalar> matrix)
      : spectrum_(std::move(spectrum)),
        potential_(std::move(potential)),
        s_(s),
        matrix_(std::move(matrix)),
        potential_is_zero_(potential_.is_zero()) {
    const Index K = matrix_.rows();
    if (potential_is_zero_) {
      factorization_.compute(matrix_.bottomRightCorner(K - 1, K - 1));
    } else {
      factorization_.compute(matrix_);
    }
    if (factorization_.info() != Eigen::Success)
      throw std::runtime_error("OperatorMatrix: factorization failed");
  }

  const MatrixX<Scalar>& matrix() const { return matrix_; }
  const SpectrumPtr<Scalar>& spectrum() const { return spectrum_; }
  const Potential<Scalar>& potential() const { return potential_; }
  FracParam<Scalar> s() const { return s_; }
  bool potential_is_zero() const { return potential_is_zero_; }
  Index num_modes() const { return matrix_.rows(); }

  // Factorization of the full matrix, or of the trailing (K-1) block on the
  // mean-zero subspace when V is identically zero.
  const Eigen::LDLT<MatrixX<Scalar>>& factorization() const { return factorization_; }

  Scalar condition_estimate() const { return Scalar(1) / factorization_.rcond(); }

 private:
  SpectrumPtr<Scalar> spectrum_;
  Potential<Scalar> potential_;
  FracParam<Scalar> s_;
  MatrixX<Scalar> matrix_;
  Eigen::LDLT<MatrixX<Scalar>> factorization_;
  bool potential_is_zero_;
};

// Galerkin matrix of the bilinear form B_{g,V}(u, v) in the eigenbasis.
// The potential block is built as a rank update from sqrt(w_p V_p)-scaled
// mode samples, so it is symmetric positive semidefinite by construction.
template <typename Scalar>
OperatorMatrix<Scalar> assemble(SpectrumPtr<Scalar> spectrum, Potential<Scalar> potential,
                                FracParam<Scalar> s) {
  const Spectrum<Scalar>& sp = *spectrum;
  if (potential.values().size() != sp.num_points())
    throw std::invalid_argument("assemble: potential not sampled on the spectrum's grid");

  const Index K = sp.num_modes();
  const VectorX<Scalar> wv = sp.weights().cwiseProduct(potential.values());
  const MatrixX<Scalar> half = sp.modes() * wv.cwiseSqrt().asDiagonal();

  MatrixX<Scalar> A = MatrixX<Scalar>::Zero(K, K);
  A.template selfadjointView<Eigen::Lower>().rankUpdate(half);
  A.template triangularView<Eigen::StrictlyUpper>() =
      A.template triangularView<Eigen::StrictlyLower>().transpose();
  for (Index k = 0; k < K; ++k) A(k, k) += spectral_power(sp.eigenvalues()[k], s.s);

  return OperatorMatrix<Scalar>(std::move(spectrum), std::move(potential), s, std::move(A));
}

// Left-hand side of the equation applied to u, i.e. synthesize(A c_u).
template <typename Scalar>
Field<Scalar> apply(const OperatorMatrix<Scalar>& op, const Field<Scalar>& u) {
  if (u.size() != op.spectrum()->num_points())
    throw std::invalid_argument("apply: grid mismatch");
  VectorX<Scalar> c = coefficients(u);
  return Field<Scalar>::from_coeffs(op.spectrum(), op.matrix() * c);
}

// Solve ((-Delta_g)^s + V) u = f.  For V identically zero the right-hand side
// must have zero mean and the mean-zero solution is returned.
template <typename Scalar>
Field<Scalar> solve(const OperatorMatrix<Scalar>& op, const Field<Scalar>& f) {
  const Spectrum<Scalar>& sp = *op.spectrum();
  if (f.size() != sp.num_points()) throw std::invalid_argument("solve: grid mismatch");

  const VectorX<Scalar> cf = coefficients(f);
  const Index K = cf.size();
  VectorX<Scalar> cu(K);

  if (op.potential_is_zero()) {
    const Scalar mean_part = std::abs(cf[0]) * std::sqrt(sp.volume());
    if (mean_part >= Scalar(1e-10))
      throw std::invalid_argument(
          "solve: V = 0 requires a mean-zero source (|integral of f| = " +
          std::to_string(static_cast<double>(mean_part)) + ")");
    cu[0] = Scalar(0);
    cu.tail(K - 1) = op.factorization().solve(cf.tail(K - 1).eval());
    const Scalar rhs_norm = cf.tail(K - 1).norm();
    const Scalar res =
        (op.matrix().bottomRightCorner(K - 1, K - 1) * cu.tail(K - 1) - cf.tail(K - 1)).norm();
    if (res > Scalar(1e-10) * std::max(rhs_norm, Scalar(1e-300)) && rhs_norm > Scalar(0))
      throw std::runtime_error("solve: residual check failed (condition estimate " +
                               std::to_string(static_cast<double>(op.condition_estimate())) + ")");
  } else {
    cu = op.factorization().solve(cf);
    // One step of iterative refinement tightens the residual bound.
    cu += op.factorization().solve((cf - op.matrix() * cu).eval());
    const Scalar res = (op.matrix() * cu - cf).norm();
    if (res > Scalar(1e-10) * std::max(cf.norm(), Scalar(1e-300)) && cf.norm() > Scalar(0))
      throw std::runtime_error("solve: residual check failed (condition estimate " +
                               std::to_string(static_cast<double>(op.condition_estimate())) + ")");
  }

  return Field<Scalar>::from_coeffs(op.spectrum(), std::move(cu));
}

// The operator is self-adjoint; the adjoint solve is the same computation,
// named so inversion code can mirror the adjoint argument.
template <typename Scalar>
Field<Scalar> solve_adjoint(const OperatorMatrix<Scalar>& op, const Field<Scalar>& rhs) {
  return solve(op, rhs);
}

// Quadratic form sum_k lambda_k^s c_k^2 + sum_p w_p V_p u_p^2, the discrete
// energy of u under the operator.
template <typename Scalar>
Scalar energy_form(const OperatorMatrix<Scalar>& op, const Field<Scalar>& u) {
  const Spectrum<Scalar>& sp = *op.spectrum();
  const VectorX<Scalar> c = coefficients(u);
  const VectorX<Scalar> usynth = synthesize(sp, c);
  Scalar spectral = Scalar(0);
  for (Index k = 0; k < c.size(); ++k)
    spectral += spectral_power(sp.eigenvalues()[k], op.s().s) * c[k] * c[k];
  const Scalar potential =
      sp.weights().dot(op.potential().values().cwiseProduct(usynth.cwiseSquare()));
  return spectral + potential;
}

}  // namespace specfrac
