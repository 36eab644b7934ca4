#include <doctest.h>

#include <cmath>
#include <numbers>

#include "paneitz/errors.hpp"
#include "paneitz/geometry.hpp"

using namespace paneitz;
using std::numbers::pi;

TEST_SUITE("geometry") {

TEST_CASE("manifold spec invariants") {
  const ManifoldSpec s(5, 1.5);
  CHECK(s.dimension() == 5);
  CHECK(s.sphere_dimension() == 4);
  CHECK(s.period() == 2.0 * pi * 1.5);
  CHECK_THROWS_AS(ManifoldSpec(4, 1.0), DomainError);
  CHECK_THROWS_AS(ManifoldSpec(5, 0.0), DomainError);
  CHECK_THROWS_AS(ManifoldSpec(5, -1.0), DomainError);
}

TEST_CASE("circle eigenvalues") {
  CHECK(circle_eigenvalue(ManifoldSpec(5, 1.0), 0) == 0.0);
  CHECK(circle_eigenvalue(ManifoldSpec(5, 1.0), 3) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(circle_eigenvalue(ManifoldSpec(5, 0.5), 1) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(circle_multiplicity(0) == 1);
  CHECK(circle_multiplicity(4) == 2);
  for (double t : {0.3, 1.0, 2.7}) {
    double last = -1.0;
    for (int m = 0; m < 20; ++m) {
      const double e = circle_eigenvalue(ManifoldSpec(6, t), m);
      CHECK(e > last);
      CHECK(e == doctest::Approx(circle_eigenvalue(ManifoldSpec(6, 1.0), m) / (t * t)).epsilon(1e-14));
      last = e;
    }
  }
}

TEST_CASE("sphere spectrum") {
  const auto s = sphere_spectrum(4, 3);
  REQUIRE(s.size() == 4);
  CHECK(s[0].eigenvalue == 0.0);
  CHECK(s[0].multiplicity == 1);
  CHECK(s[1].eigenvalue == 4.0);
  CHECK(s[1].multiplicity == 5);
  CHECK(s[2].eigenvalue == 10.0);
  CHECK(s[2].multiplicity == 14);
  // S^2: 2l + 1
  const auto s2 = sphere_spectrum(2, 5);
  for (int l = 0; l <= 5; ++l) CHECK(s2[static_cast<std::size_t>(l)].multiplicity == 2 * l + 1);
}

TEST_CASE("sphere and product volumes") {
  CHECK(sphere_volume(1) == doctest::Approx(2.0 * pi).epsilon(1e-14));
  CHECK(sphere_volume(2) == doctest::Approx(4.0 * pi).epsilon(1e-14));
  CHECK(sphere_volume(4) == doctest::Approx(8.0 * pi * pi / 3.0).epsilon(1e-14));
  CHECK(product_volume(ManifoldSpec(5, 1.0)) == doctest::Approx(16.0 * std::pow(pi, 3) / 3.0).epsilon(1e-14));
  CHECK(product_volume(ManifoldSpec(5, 0.5)) == doctest::Approx(82.683).epsilon(1e-4));
  CHECK(product_volume(ManifoldSpec(6, 1.0)) == doctest::Approx(2.0 * pi * std::pow(pi, 3)).epsilon(1e-14));
  for (int n = 5; n <= 12; ++n) {
    CHECK(product_volume(ManifoldSpec(n, 2.2)) ==
          doctest::Approx(2.0 * product_volume(ManifoldSpec(n, 1.1))).epsilon(1e-14));
  }
}

TEST_CASE("quadrature grid") {
  const QuadratureGrid g(32, 2.0 * pi);
  double sum = 0.0;
  for (int j = 0; j < g.size(); ++j) sum += g.weight();
  CHECK(sum == doctest::Approx(2.0 * pi).epsilon(1e-14));
  CHECK(g.point(8) == doctest::Approx(pi / 2.0));
  CHECK_THROWS_AS(QuadratureGrid(15, 1.0), DomainError);
  CHECK_THROWS_AS(QuadratureGrid(8, 1.0), DomainError);
  // squares of trigonometric polynomials of degree < N/2 are integrated exactly
  const double l = g.period();
  double integral = 0.0;
  for (const double s : g.points()) {
    const double p = 1.0 + 0.3 * std::cos(7.0 * s) - 0.2 * std::sin(15.0 * s);
    integral += g.weight() * p * p;
  }
  CHECK(integral == doctest::Approx(l * (1.0 + 0.045 + 0.02)).epsilon(1e-13));
}

}
