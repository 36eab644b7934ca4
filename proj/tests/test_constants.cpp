#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "paneitz/constants.hpp"
#include "paneitz/errors.hpp"

using namespace paneitz;

TEST_SUITE("constants") {

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(5) == 10.0);
  CHECK(critical_exponent(6) == 6.0);
  CHECK(critical_exponent(8) == 4.0);
  CHECK_THROWS_AS(critical_exponent(4), DomainError);
}

TEST_CASE("sharp constant against the high-precision Gamma formula") {
  CHECK(sharp_constant(5).k0_inv_sq == doctest::Approx(102.37).epsilon(1e-3));
  CHECK(sharp_constant(8).k0_inv_sq == doctest::Approx(653.8).epsilon(1e-3));
  double last = 0.0;
  for (int n = 5; n <= 12; ++n) {
    const auto k = sharp_constant(n);
    const double ref = oracle::k0_inv_sq(n);
    CHECK(std::abs(k.k0_inv_sq - ref) / ref <= 1e-12);
    CHECK(k.k0 * k.k0 * k.k0_inv_sq == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(k.k0_inv_sq > last);
    last = k.k0_inv_sq;
  }
  CHECK_THROWS_AS(sharp_constant(3), DomainError);
}

TEST_CASE("bubble coefficient") {
  CHECK(bubble_coefficient(5) == doctest::Approx(std::pow(105.0, 0.125)).epsilon(1e-14));
  CHECK(bubble_coefficient(5) == doctest::Approx(1.7893).epsilon(1e-4));
  CHECK(bubble_coefficient(8) == doctest::Approx(43.8178).epsilon(1e-5));
  CHECK(bubble_coefficient(12) == doctest::Approx(13440.0).epsilon(1e-14));
}

TEST_CASE("einstein coefficients") {
  const auto z = einstein_coefficients(5, 0.0);
  CHECK(z.alpha == 0.0);
  CHECK(z.a == 0.0);
  const auto e5 = einstein_coefficients(5, 20.0);
  CHECK(e5.alpha == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(e5.a == doctest::Approx(6.5625).epsilon(1e-14));
  const auto e6 = einstein_coefficients(6, 30.0);
  CHECK(e6.alpha == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(e6.a == doctest::Approx(24.0).epsilon(1e-14));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> sd(0.1, 100.0);
  for (int n = 5; n <= 12; ++n) {
    const double s = sd(rng);
    const auto e = einstein_coefficients(n, s);
    const double gap = e.alpha * e.alpha / 4.0 - e.a;
    const double ref = s * s / (n * n * (n - 1.0) * (n - 1.0));
    CHECK(std::abs(gap - ref) <= 1e-12 * (e.alpha * e.alpha / 4.0));
  }
}

TEST_CASE("factorization") {
  const auto f1 = factorize(2.0, 1.0);
  CHECK(f1.c == 1.0);
  CHECK(f1.d == 1.0);
  const auto f2 = factorize(5.0, 4.0);
  CHECK(f2.c == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(f2.d == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f2.c + f2.d == doctest::Approx(5.0).epsilon(1e-15));
  const auto f3 = factorize(10.0, 25.0);
  CHECK(f3.c == 5.0);
  CHECK(f3.d == 5.0);
  CHECK_THROWS_AS(factorize(2.0, 1.5), FactorizationError);
  CHECK_THROWS_AS(factorize(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(factorize(2.0, -1.0), DomainError);
  CHECK_THROWS_AS(OperatorParams(2.0, 2.0), FactorizationError);

  // (mu + c)(mu + d) recombines to the symbol for random admissible pairs
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ad(0.01, 200.0), fr(1e-6, 1.0), md(0.0, 1e3);
  for (int i = 0; i < 200; ++i) {
    const double alpha = ad(rng);
    const double a = fr(rng) * alpha * alpha / 4.0;
    const OperatorParams p(alpha, a);
    CHECK(p.c() >= p.d());
    CHECK(p.d() > 0.0);
    CHECK(p.c() * p.d() == doctest::Approx(a).epsilon(1e-12));
    const double mu = md(rng);
    CHECK((mu + p.c()) * (mu + p.d()) == doctest::Approx(p.symbol(mu)).epsilon(1e-12));
  }
}

TEST_CASE("constant branch") {
  const auto c1 = constant_branch(5, 1.0, 1.0);
  CHECK(c1.u_bar == 1.0);
  CHECK(c1.energy == 1.0);
  const auto c4 = constant_branch(5, 4.0, 165.366);
  CHECK(c4.u_bar == doctest::Approx(1.1892).epsilon(1e-4));
  CHECK(c4.energy == doctest::Approx(935.5).epsilon(1e-4));
  CHECK(constant_branch(5, OperatorParams::model(2.0).a(), 3.0).u_bar == 1.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ad(1e-3, 1e3);
  for (int i = 0; i < 100; ++i) {
    const double a = ad(rng);
    for (int n : {5, 6, 7, 9}) {
      const auto c = constant_branch(n, a, 1.0);
      const double p = critical_exponent(n);
      CHECK(std::abs(a * c.u_bar - std::pow(c.u_bar, p - 1.0)) <= 1e-13 * a * c.u_bar);
    }
  }
}

TEST_CASE("schedule validator") {
  std::vector<double> grid;
  for (int k = 1; k <= 128; ++k) grid.push_back(k);
  const auto model = validate_schedule([](double a) { return a * a / 4.0; }, grid);
  CHECK(model.a1_ok);
  CHECK(model.a2_proxy_ok);
  CHECK(model.a2_label == "proxy");
  CHECK(model.verdict());

  const auto linear = validate_schedule([](double a) { return a; }, grid);
  CHECK_FALSE(linear.a2_proxy_ok);
  CHECK_FALSE(linear.verdict());

  const std::vector<double> fine = {0.1, 0.2, 0.25, 0.3, 1.0, 2.0};
  const auto cubic = validate_schedule([](double a) { return a * a * a; }, fine);
  CHECK_FALSE(cubic.a1_ok);
  for (const auto& e : cubic.entries) CHECK(e.a1_ok == (e.a <= e.alpha * e.alpha / 4.0));
  CHECK(cubic.entries[2].a1_ok);   // alpha = 1/4 is the boundary
  CHECK_FALSE(cubic.entries[3].a1_ok);

  CHECK_THROWS_AS(validate_schedule([](double a) { return a; }, {2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate_schedule([](double a) { return a; }, {}), DomainError);
}

}
