#include "specfrac/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace specfrac;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("circle spectrum matches the analytic eigenpairs") {
  // -d^2/dx^2 on the 2*pi circle: eigenvalues m^2, eigenfunctions
  // 1/sqrt(2*pi), cos(mx)/sqrt(pi), sin(mx)/sqrt(pi).
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 1, 8);
  REQUIRE(sp->num_modes() == 3);

  CHECK(sp->eigenvalues()[0] == 0.0);
  CHECK(sp->eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sp->eigenvalues()[2] == doctest::Approx(1.0).epsilon(1e-14));

  const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (Index p = 0; p < sp->num_points(); ++p) {
    const double x = sp->grid().points(p, 0);
    CHECK(sp->modes()(0, p) == doctest::Approx(inv_sqrt_2pi).epsilon(1e-14));
    CHECK(sp->modes()(1, p) == doctest::Approx(std::cos(x) * inv_sqrt_pi).epsilon(1e-13));
    CHECK(sp->modes()(2, p) == doctest::Approx(std::sin(x) * inv_sqrt_pi).epsilon(1e-13));
  }
}

TEST_CASE("mode zero is the constant vol^(-1/2)") {
  auto sp = build_torus_spectrum<double>(1, {3.5}, 4, 16);
  const double expected = 1.0 / std::sqrt(3.5);
  CHECK((sp->modes().row(0).array() - expected).abs().maxCoeff() < 1e-14);

  auto sp2 = build_torus_spectrum<double>(2, {kTwoPi, 1.0}, 2, 6);
  const double expected2 = 1.0 / std::sqrt(kTwoPi);
  CHECK((sp2->modes().row(0).array() - expected2).abs().maxCoeff() < 1e-14);
}

TEST_CASE("square torus eigenvalue of the (1,1) mode is 2") {
  auto sp = build_torus_spectrum<double>(2, {kTwoPi, kTwoPi}, 2, 8);
  // Eigenvalues |m|^2 for m in Z^2: 0, 1 (x4), 2 (x4), 4 (x4), 5 (x8), 8 (x4).
  int count_two = 0;
  for (Index k = 0; k < sp->num_modes(); ++k)
    if (std::abs(sp->eigenvalues()[k] - 2.0) < 1e-12) ++count_two;
  CHECK(count_two == 4);
}

TEST_CASE("torus spectra are discretely orthonormal") {
  for (auto sp : {build_torus_spectrum<double>(1, {kTwoPi}, 20, 41),
                  build_torus_spectrum<double>(1, {1.0}, 7, 32),
                  build_torus_spectrum<double>(2, {kTwoPi, 3.0}, 3, 9)}) {
    auto rep = orthonormality_report(*sp);
    CHECK(rep.residual < 1e-10);
  }
}

TEST_CASE("weights sum to the product of circumferences") {
  auto sp = build_torus_spectrum<double>(2, {2.5, 4.0}, 2, 7);
  CHECK(sp->weights().sum() == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(sp->volume() == doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("eigenvalues ascend and multiplicities match the circle count") {
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 10, 32);
  for (Index k = 0; k + 1 < sp->num_modes(); ++k)
    CHECK(sp->eigenvalues()[k] <= sp->eigenvalues()[k + 1]);
  // lambda = 1 on the 2*pi circle has multiplicity exactly 2.
  int mult = 0;
  for (Index k = 0; k < sp->num_modes(); ++k)
    if (std::abs(sp->eigenvalues()[k] - 1.0) < 1e-12) ++mult;
  CHECK(mult == 2);
}

TEST_CASE("builder rejects invalid arguments") {
  CHECK_THROWS_AS(build_torus_spectrum<double>(1, {kTwoPi}, 4, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_torus_spectrum<double>(1, {-1.0}, 2, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_torus_spectrum<double>(3, {1.0, 1.0, 1.0}, 2, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_torus_spectrum<double>(1, {kTwoPi}, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_torus_spectrum<double>(2, {kTwoPi}, 2, 8), std::invalid_argument);
}

TEST_CASE("spectrum constructor enforces structural invariants") {
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 2, 8);

  SUBCASE("shuffled eigenvalues") {
    VectorX<double> bad = sp->eigenvalues();
    std::swap(bad[1], bad[3]);
    CHECK_THROWS_WITH_AS(
        Spectrum<double>("bad", sp->grid(), bad, sp->modes(), sp->volume()),
        "Spectrum: eigenvalues not ascending", std::invalid_argument);
  }
  SUBCASE("nonzero first eigenvalue") {
    VectorX<double> bad = sp->eigenvalues();
    bad[0] = 1e-6;
    CHECK_THROWS_AS(Spectrum<double>("bad", sp->grid(), bad, sp->modes(), sp->volume()),
                    std::invalid_argument);
  }
  SUBCASE("nonpositive weight") {
    Grid<double> g = sp->grid();
    g.weights[0] = 0.0;
    CHECK_THROWS_AS(
        Spectrum<double>("bad", g, sp->eigenvalues(), sp->modes(), sp->volume()),
        std::invalid_argument);
  }
  SUBCASE("volume mismatch") {
    CHECK_THROWS_AS(
        Spectrum<double>("bad", sp->grid(), sp->eigenvalues(), sp->modes(), 2.0 * sp->volume()),
        std::invalid_argument);
  }
}

TEST_CASE("orthonormality report names the worst pair") {
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 3, 16);
  MatrixX<double> modes = sp->modes();
  modes.row(2) += 1e-3 * modes.row(4);
  Spectrum<double> perturbed("perturbed", sp->grid(), sp->eigenvalues(), modes, sp->volume());
  auto rep = orthonormality_report(perturbed);
  CHECK(rep.residual > 1e-4);
  const Index lo = std::min(rep.j, rep.k), hi = std::max(rep.j, rep.k);
  CHECK(lo == 2);
  CHECK(hi == 4);
}

TEST_CASE("region from a coordinate predicate on the circle") {
  // x in (0, pi/2) on a 64-point grid selects points 1..15.
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 4, 64);
  Region region = build_region(*sp, [](const auto& x) {
    return x[0] > 0.0 && x[0] < std::numbers::pi / 2.0;
  }, "quarter-arc");
  CHECK(region.num_inside() == 15);
  CHECK(region.grid_size() == 64);
}

TEST_CASE("region edge cases") {
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 2, 8);

  CHECK_THROWS_AS(build_region(*sp, [](const auto&) { return false; }, "empty"),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_region(*sp, [](const auto&) { return true; }, "everything"),
                  std::invalid_argument);

  Region singleton = build_region(*sp, std::vector<Index>{0}, "point");
  CHECK(singleton.num_inside() == 1);
  CHECK(singleton.outside_indices().size() == 7);

  CHECK_THROWS_AS(build_region(*sp, std::vector<Index>{99}, "oob"), std::invalid_argument);
}

TEST_CASE("torus grid distance wraps around") {
  auto sp = build_torus_spectrum<double>(1, {kTwoPi}, 2, 8);
  // Points 0 and 7 are one grid step apart through the seam.
  CHECK(sp->grid().point_distance(0, 7) == doctest::Approx(kTwoPi / 8.0).epsilon(1e-13));
  CHECK(sp->grid().point_distance(0, 4) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
}
