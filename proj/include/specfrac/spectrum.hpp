#pragma once

// Discrete spectral data for closed manifolds: eigenvalues, eigenfunction
// samples on a quadrature grid, and the quadrature weights that stand in for
// the volume element.  Flat tori (dim 1 or 2) are built analytically here;
// precomputed eigen-data for other manifolds enters through io.hpp and is
// re-validated against the same invariants.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specfrac {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Quadrature grid: P point coordinates (P x dim) and strictly positive
// weights w_p whose sum is the manifold volume.  periods[a] > 0 marks axis a
// as periodic with that period (tori); an empty vector means coordinate
// distances are taken as-is.
template <typename Scalar>
struct Grid {
  MatrixX<Scalar> points;
  VectorX<Scalar> weights;
  std::vector<Scalar> periods;

  Index num_points() const { return points.rows(); }
  Index dim() const { return points.cols(); }

  Scalar distance(const Eigen::Ref<const VectorX<Scalar>>& x,
                  const Eigen::Ref<const VectorX<Scalar>>& y) const {
    Scalar d2 = Scalar(0);
    for (Index a = 0; a < points.cols(); ++a) {
      Scalar d = std::abs(x[a] - y[a]);
      if (a < static_cast<Index>(periods.size()) && periods[static_cast<size_t>(a)] > Scalar(0)) {
        const Scalar c = periods[static_cast<size_t>(a)];
        d = std::min(d, c - d);
      }
      d2 += d * d;
    }
    return std::sqrt(d2);
  }

  Scalar point_distance(Index p, Index q) const {
    VectorX<Scalar> x = points.row(p).transpose();
    VectorX<Scalar> y = points.row(q).transpose();
    return distance(x, y);
  }
};

// Eigenvalues 0 = lambda_0 <= lambda_1 <= ... and sampled eigenfunctions.
// Row k of modes() holds phi_k at every grid point; the rows are orthonormal
// under the weighted discrete inner product sum_p w_p phi_j(x_p) phi_k(x_p).
template <typename Scalar>
class Spectrum {
 public:
  Spectrum(std::string name, Grid<Scalar> grid, VectorX<Scalar> eigenvalues,
           MatrixX<Scalar> modes, Scalar volume)
      : name_(std::move(name)),
        grid_(std::move(grid)),
        eigenvalues_(std::move(eigenvalues)),
        modes_(std::move(modes)),
        volume_(volume) {
    const Index K = eigenvalues_.size();
    const Index P = grid_.num_points();
    if (K < 1 || P < 1) throw std::invalid_argument("Spectrum: empty data");
    if (modes_.rows() != K || modes_.cols() != P)
      throw std::invalid_argument("Spectrum: modes must be K x P");
    if (grid_.weights.size() != P)
      throw std::invalid_argument("Spectrum: weights/points size mismatch");
    if ((grid_.weights.array() <= Scalar(0)).any())
      throw std::invalid_argument("Spectrum: quadrature weights must be positive");
    if (!(volume_ > Scalar(0)))
      throw std::invalid_argument("Spectrum: volume must be positive");
    const Scalar wsum = grid_.weights.sum();
    if (std::abs(wsum - volume_) > Scalar(1e-12) * volume_)
      throw std::invalid_argument("Spectrum: weight sum does not match declared volume");
    if (std::abs(eigenvalues_[0]) > Scalar(1e-10))
      throw std::invalid_argument("Spectrum: lambda_0 not within 1e-10 of zero");
    for (Index k = 0; k + 1 < K; ++k)
      if (eigenvalues_[k] > eigenvalues_[k + 1])
        throw std::invalid_argument("Spectrum: eigenvalues not ascending");
  }

  const std::string& name() const { return name_; }
  const Grid<Scalar>& grid() const { return grid_; }
  const VectorX<Scalar>& eigenvalues() const { return eigenvalues_; }
  const MatrixX<Scalar>& modes() const { return modes_; }
  const VectorX<Scalar>& weights() const { return grid_.weights; }
  Scalar volume() const { return volume_; }
  Index num_modes() const { return eigenvalues_.size(); }
  Index num_points() const { return grid_.num_points(); }
  Index dim() const { return grid_.dim(); }

 private:
  std::string name_;
  Grid<Scalar> grid_;
  VectorX<Scalar> eigenvalues_;
  MatrixX<Scalar> modes_;
  Scalar volume_;
};

template <typename Scalar>
using SpectrumPtr = std::shared_ptr<const Spectrum<Scalar>>;

// Largest deviation of sum_p w_p phi_j phi_k from delta_jk, with the pair
// attaining it.
template <typename Scalar>
struct OrthonormalityReport {
  Scalar residual = 0;
  Index j = 0;
  Index k = 0;
};

template <typename Scalar>
OrthonormalityReport<Scalar> orthonormality_report(const Spectrum<Scalar>& sp) {
  MatrixX<Scalar> gram = sp.modes() * sp.weights().asDiagonal() * sp.modes().transpose();
  gram.diagonal().array() -= Scalar(1);
  OrthonormalityReport<Scalar> rep;
  for (Index j = 0; j < gram.rows(); ++j)
    for (Index k = 0; k < gram.cols(); ++k)
      if (std::abs(gram(j, k)) > rep.residual) rep = {std::abs(gram(j, k)), j, k};
  return rep;
}

// A proper open subset of the manifold, as a mask over grid points.  Both the
// inside and the complement must be nonempty.
class Region {
 public:
  Region(BoolArray mask, std::string name) : mask_(std::move(mask)), name_(std::move(name)) {
    const Index inside = mask_.count();
    if (inside == 0) throw std::invalid_argument("Region: no grid point selected");
    if (inside == mask_.size())
      throw std::invalid_argument("Region: selection covers every grid point");
  }

  const BoolArray& mask() const { return mask_; }
  const std::string& name() const { return name_; }
  Index grid_size() const { return mask_.size(); }
  Index num_inside() const { return mask_.count(); }
  bool contains(Index p) const { return mask_[p]; }

  std::vector<Index> inside_indices() const {
    std::vector<Index> idx;
    for (Index p = 0; p < mask_.size(); ++p)
      if (mask_[p]) idx.push_back(p);
    return idx;
  }
  std::vector<Index> outside_indices() const {
    std::vector<Index> idx;
    for (Index p = 0; p < mask_.size(); ++p)
      if (!mask_[p]) idx.push_back(p);
    return idx;
  }

  bool same_mask(const Region& other) const {
    return mask_.size() == other.mask_.size() && (mask_ == other.mask_).all();
  }

 private:
  BoolArray mask_;
  std::string name_;
};

template <typename Scalar, typename Predicate>
Region build_region(const Spectrum<Scalar>& sp, Predicate&& inside, std::string name) {
  BoolArray mask(sp.num_points());
  for (Index p = 0; p < sp.num_points(); ++p) mask[p] = static_cast<bool>(inside(sp.grid().points.row(p)));
  return Region(std::move(mask), std::move(name));
}

template <typename Scalar>
Region build_region(const Spectrum<Scalar>& sp, const std::vector<Index>& indices,
                    std::string name) {
  BoolArray mask = BoolArray::Constant(sp.num_points(), false);
  for (Index p : indices) {
    if (p < 0 || p >= sp.num_points())
      throw std::invalid_argument("build_region: index out of range");
    mask[p] = true;
  }
  return Region(std::move(mask), std::move(name));
}

namespace detail {

// Axis mode j on a circle of circumference c: j = 0 is the constant,
// j = 2m-1 the cosine and j = 2m the sine of frequency m.  Cos-before-sin is
// the tie-breaking convention for equal eigenvalues.
template <typename Scalar>
Scalar axis_mode_value(int j, Scalar x, Scalar circumference) {
  const Scalar omega = Scalar(2) * std::numbers::pi_v<Scalar> / circumference;
  if (j == 0) return Scalar(1) / std::sqrt(circumference);
  const int m = (j + 1) / 2;
  const Scalar amp = std::sqrt(Scalar(2) / circumference);
  return (j % 2 == 1) ? amp * std::cos(omega * m * x) : amp * std::sin(omega * m * x);
}

template <typename Scalar>
Scalar axis_mode_eigenvalue(int j, Scalar circumference) {
  const Scalar omega = Scalar(2) * std::numbers::pi_v<Scalar> / circumference;
  const int m = (j + 1) / 2;
  return (omega * m) * (omega * m);
}

}  // namespace detail

// Analytic spectrum of the flat torus prod_i R/(c_i Z).  Eigenfunctions are
// tensor products of the 1-D real trigonometric basis; quadrature is the
// uniform rectangle rule, exact for the trigonometric polynomials retained
// when grid_per_axis >= 2*modes_per_axis + 1.  Modes are sorted by
// eigenvalue, ties broken lexicographically in the per-axis mode ids.
template <typename Scalar = double>
SpectrumPtr<Scalar> build_torus_spectrum(int dim, const std::vector<Scalar>& circumferences,
                                         int modes_per_axis, int grid_per_axis) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("build_torus_spectrum: dim must be 1 or 2");
  if (static_cast<int>(circumferences.size()) != dim)
    throw std::invalid_argument("build_torus_spectrum: need one circumference per axis");
  for (Scalar c : circumferences)
    if (!(c > Scalar(0)))
      throw std::invalid_argument("build_torus_spectrum: circumferences must be positive");
  if (modes_per_axis < 1)
    throw std::invalid_argument("build_torus_spectrum: modes_per_axis must be positive");
  if (grid_per_axis < 2 * modes_per_axis + 1)
    throw std::invalid_argument(
        "build_torus_spectrum: grid_per_axis must be at least 2*modes_per_axis + 1 "
        "(quadrature exactness)");

  const int axis_modes = 2 * modes_per_axis + 1;
  const int N = grid_per_axis;
  Index K = 1, P = 1;
  for (int a = 0; a < dim; ++a) {
    K *= axis_modes;
    P *= N;
  }

  Scalar volume = Scalar(1);
  for (Scalar c : circumferences) volume *= c;

  Grid<Scalar> grid;
  grid.points.resize(P, dim);
  grid.weights = VectorX<Scalar>::Constant(P, volume / Scalar(P));
  grid.periods = circumferences;

  // Per-axis tables: values[a](j, q) = axis mode j at grid node q.
  std::vector<MatrixX<Scalar>> values(dim);
  std::vector<VectorX<Scalar>> nus(dim);
  for (int a = 0; a < dim; ++a) {
    const Scalar c = circumferences[a];
    const Scalar h = c / Scalar(N);
    values[a].resize(axis_modes, N);
    nus[a].resize(axis_modes);
    for (int j = 0; j < axis_modes; ++j) {
      nus[a][j] = detail::axis_mode_eigenvalue<Scalar>(j, c);
      for (int q = 0; q < N; ++q)
        values[a](j, q) = detail::axis_mode_value<Scalar>(j, Scalar(q) * h, c);
    }
  }

  // Grid points in row-major order (first axis slowest).
  for (Index p = 0; p < P; ++p) {
    Index rest = p;
    for (int a = dim - 1; a >= 0; --a) {
      const Index q = rest % N;
      rest /= N;
      grid.points(p, a) = Scalar(q) * (circumferences[a] / Scalar(N));
    }
  }

  // Enumerate mode tuples lexicographically, then stable-sort by eigenvalue.
  VectorX<Scalar> lambda(K);
  MatrixX<Scalar> modes(K, P);
  for (Index k = 0; k < K; ++k) {
    Index rest = k;
    int js[2] = {0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      js[a] = static_cast<int>(rest % axis_modes);
      rest /= axis_modes;
    }
    Scalar lam = Scalar(0);
    for (int a = 0; a < dim; ++a) lam += nus[a][js[a]];
    lambda[k] = lam;
    for (Index p = 0; p < P; ++p) {
      Index prest = p;
      Scalar v = Scalar(1);
      for (int a = dim - 1; a >= 0; --a) {
        const Index q = prest % N;
        prest /= N;
        v *= values[a](js[a], q);
      }
      modes(k, p) = v;
    }
  }

  std::vector<Index> order(K);
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return lambda[i] < lambda[j]; });

  VectorX<Scalar> lambda_sorted(K);
  MatrixX<Scalar> modes_sorted(K, P);
  for (Index k = 0; k < K; ++k) {
    lambda_sorted[k] = lambda[order[k]];
    modes_sorted.row(k) = modes.row(order[k]);
  }
  lambda_sorted[0] = Scalar(0);  // exactly zero for the constant mode

  std::string name = dim == 1 ? "torus1d" : "torus2d";
  return std::make_shared<Spectrum<Scalar>>(std::move(name), std::move(grid),
                                            std::move(lambda_sorted), std::move(modes_sorted),
                                            volume);
}

}  // namespace specfrac
