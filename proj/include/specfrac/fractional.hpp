#pragma once

// Spectral functions of the Laplace-Beltrami operator on the truncated
// eigenbasis: analysis/synthesis between grid samples and coefficients,
// fractional powers (-Delta_g)^(s*mult), the L2 pairing, and Sobolev norms.

#include "specfrac/spectrum.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace specfrac {

// Fractional order s in (0, 1].  s = 1 is admitted as a validation endpoint
// against the classical Laplacian.
template <typename Scalar>
struct FracParam {
  Scalar s;

  explicit FracParam(Scalar order) : s(order) {
    if (!(s > Scalar(0)) || s > Scalar(1))
      throw std::invalid_argument("FracParam: s must lie in (0, 1]");
  }
};

// lambda^a with the zero eigenvalue mapped to zero for a > 0.
template <typename Scalar>
Scalar spectral_power(Scalar lambda, Scalar a) {
  if (a == Scalar(0)) return Scalar(1);
  if (lambda <= Scalar(0)) return Scalar(0);
  return std::pow(lambda, a);
}

// Coefficients c_k = sum_p w_p u(x_p) phi_k(x_p).
template <typename Scalar, typename Derived>
VectorX<Scalar> analyze(const Spectrum<Scalar>& sp, const Eigen::MatrixBase<Derived>& values) {
  if (values.size() != sp.num_points())
    throw std::invalid_argument("analyze: sample count does not match grid");
  return sp.modes() * sp.weights().cwiseProduct(values.derived());
}

// Samples u(x_p) = sum_k c_k phi_k(x_p).
template <typename Scalar, typename Derived>
VectorX<Scalar> synthesize(const Spectrum<Scalar>& sp, const Eigen::MatrixBase<Derived>& coeffs) {
  if (coeffs.size() != sp.num_modes())
    throw std::invalid_argument("synthesize: coefficient count does not match spectrum");
  return sp.modes().transpose() * coeffs.derived();
}

// A real function on the manifold, held as grid samples with the spectral
// coefficients attached when they are known.  Immutable after construction.
template <typename Scalar>
class Field {
 public:
  Field() = default;

  static Field from_values(SpectrumPtr<Scalar> sp, VectorX<Scalar> values) {
    if (!sp) throw std::invalid_argument("Field: null spectrum");
    if (values.size() != sp->num_points())
      throw std::invalid_argument("Field: sample count does not match grid");
    Field f;
    f.spectrum_ = std::move(sp);
    f.values_ = std::move(values);
    return f;
  }

  static Field from_coeffs(SpectrumPtr<Scalar> sp, VectorX<Scalar> coeffs) {
    if (!sp) throw std::invalid_argument("Field: null spectrum");
    if (coeffs.size() != sp->num_modes())
      throw std::invalid_argument("Field: coefficient count does not match spectrum");
    Field f;
    f.spectrum_ = std::move(sp);
    f.values_ = synthesize(*f.spectrum_, coeffs);
    f.coeffs_ = std::move(coeffs);
    return f;
  }

  const SpectrumPtr<Scalar>& spectrum() const { return spectrum_; }
  const VectorX<Scalar>& values() const { return values_; }
  bool has_coeffs() const { return coeffs_.has_value(); }
  const VectorX<Scalar>& coeffs() const {
    if (!coeffs_) throw std::logic_error("Field: coefficients not attached");
    return *coeffs_;
  }
  Index size() const { return values_.size(); }

 private:
  SpectrumPtr<Scalar> spectrum_;
  VectorX<Scalar> values_;
  std::optional<VectorX<Scalar>> coeffs_;
};

// Coefficient vector of a field, analyzing the samples when none are attached.
template <typename Scalar>
VectorX<Scalar> coefficients(const Field<Scalar>& u) {
  if (u.has_coeffs()) return u.coeffs();
  return analyze(*u.spectrum(), u.values());
}

// Copy of u with coefficients attached.
template <typename Scalar>
Field<Scalar> analyzed(const Field<Scalar>& u) {
  return Field<Scalar>::from_coeffs(u.spectrum(), coefficients(u));
}

// (-Delta_g)^(s * power_multiplier) u via coefficient scaling.  The returned
// field carries both representations.
template <typename Scalar>
Field<Scalar> apply_frac(const Field<Scalar>& u, const FracParam<Scalar>& p,
                         Scalar power_multiplier = Scalar(1)) {
  const Spectrum<Scalar>& sp = *u.spectrum();
  const Scalar a = p.s * power_multiplier;
  VectorX<Scalar> c = coefficients(u);
  for (Index k = 0; k < c.size(); ++k) c[k] *= spectral_power(sp.eigenvalues()[k], a);
  return Field<Scalar>::from_coeffs(u.spectrum(), std::move(c));
}

template <typename Scalar, typename DU, typename DV>
Scalar l2_inner(const Spectrum<Scalar>& sp, const Eigen::MatrixBase<DU>& u,
                const Eigen::MatrixBase<DV>& v) {
  if (u.size() != sp.num_points() || v.size() != sp.num_points())
    throw std::invalid_argument("l2_inner: sample count does not match grid");
  return sp.weights().dot(u.derived().cwiseProduct(v.derived()));
}

template <typename Scalar>
Scalar l2_inner(const Field<Scalar>& u, const Field<Scalar>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("l2_inner: grid mismatch");
  return l2_inner(*u.spectrum(), u.values(), v.values());
}

template <typename Scalar>
Scalar l2_norm(const Field<Scalar>& u) {
  return std::sqrt(std::max(Scalar(0), l2_inner(u, u)));
}

// Inhomogeneous Sobolev norm (sum_k (1 + lambda_k)^a c_k^2)^(1/2).  The
// (1 + lambda) weight keeps constants in the norm despite lambda_0 = 0.
template <typename Scalar>
Scalar sobolev_norm(const Field<Scalar>& u, Scalar a) {
  if (a < Scalar(0)) throw std::invalid_argument("sobolev_norm: order must be nonnegative");
  const VectorX<Scalar> c = coefficients(u);
  const auto& lambda = u.spectrum()->eigenvalues();
  Scalar acc = Scalar(0);
  for (Index k = 0; k < c.size(); ++k)
    acc += std::pow(Scalar(1) + lambda[k], a) * c[k] * c[k];
  return std::sqrt(acc);
}

// Consistency of the two representations: max_p |synthesize(coeffs) - values|.
template <typename Scalar>
Scalar representation_residual(const Field<Scalar>& u) {
  if (!u.has_coeffs()) return Scalar(0);
  return (synthesize(*u.spectrum(), u.coeffs()) - u.values()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Field<Scalar> constant_field(SpectrumPtr<Scalar> sp, Scalar value) {
  VectorX<Scalar> v = VectorX<Scalar>::Constant(sp->num_points(), value);
  return Field<Scalar>::from_values(std::move(sp), std::move(v));
}

}  // namespace specfrac
