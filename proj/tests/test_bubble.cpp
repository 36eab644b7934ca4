#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "paneitz/bubble.hpp"
#include "paneitz/constants.hpp"
#include "paneitz/errors.hpp"
#include "paneitz/geometry.hpp"

using namespace paneitz;

namespace {

// omega_{n-1} c^{2#} lambda_inf^{-n/4} int_0^inf (1+r^2)^{-n} r^{n-1} dr, the radial integral
// being B(n/2, n/2) / 2.
double energy_oracle(int n, double lambda_inf) {
  const double p = critical_exponent(n);
  const double c = bubble_coefficient(n);
  return sphere_volume(n - 1) * std::pow(c, p) * std::pow(lambda_inf, -0.25 * n) * 0.5 *
         boost::math::beta(0.5 * n, 0.5 * n);
}

// Central differences of order h^4 for the second and fourth derivative.
double fd2(const RadialField& f, double r, double h) {
  return (-f.value(r + 2 * h) + 16 * f.value(r + h) - 30 * f.value(r) + 16 * f.value(r - h) -
          f.value(r - 2 * h)) /
         (12 * h * h);
}

}  // namespace

TEST_SUITE("bubble") {

TEST_CASE("bubble values") {
  const double c5 = bubble_coefficient(5);
  CHECK(bubble_eval({5, 1.0, 1.0}, 0.0) == doctest::Approx(c5).epsilon(1e-15));
  CHECK(bubble_eval({5, 1.0, 1.0}, 10.0) == doctest::Approx(c5 / std::sqrt(101.0)).epsilon(1e-14));
  CHECK(bubble_eval({5, 1.0, 1.0}, 10.0) == doctest::Approx(0.17804).epsilon(1e-4));
  CHECK(bubble_eval({5, 2.0, 1.0}, 0.0) == doctest::Approx(2.5305).epsilon(1e-4));
  CHECK(bubble_peak({7, 1.3, 2.0}) == doctest::Approx(bubble_eval({7, 1.3, 2.0}, 0.0)).epsilon(1e-15));
  const std::vector<double> x = {3.0, 4.0, 0.0, 0.0, 0.0};
  BubbleParams shifted{5, 1.0, 1.0, {3.0, 0.0, 0.0, 0.0, 0.0}};
  CHECK(bubble_eval_at(shifted, x) == doctest::Approx(bubble_eval({5, 1.0, 1.0}, 4.0)).epsilon(1e-15));
  CHECK_THROWS_AS((BubbleParams{5, 0.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((BubbleParams{5, 1.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((BubbleParams{4, 1.0, 1.0}.validate()), DomainError);
}

TEST_CASE("bubble is decreasing and forms a dilation family") {
  for (int n : {5, 6, 8, 11}) {
    const BubbleParams p{n, 1.0, 1.0};
    double last = bubble_eval(p, 0.0);
    for (double r = 0.1; r < 30.0; r += 0.37) {
      const double v = bubble_eval(p, r);
      CHECK(v > 0.0);
      CHECK(v < last);
      last = v;
    }
    for (double l2 : {0.5, 2.0, 3.3}) {
      const BubbleParams q{n, l2, 1.0};
      for (double r : {0.0, 0.4, 1.7, 9.0}) {
        const double ratio = l2 / 1.0;
        CHECK(bubble_eval(q, r) ==
              doctest::Approx(std::pow(ratio, 0.5 * (n - 4)) * bubble_eval(p, ratio * r)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("pde residual of the bubble") {
  for (int n : {5, 6, 7, 8, 10, 12}) {
    for (double l0 : {0.5, 1.0, 2.0}) {
      for (double li : {1.0, 3.0}) {
        const auto r = pde_residual({n, l0, li}, 50.0, 2000);
        CHECK(r.sup <= 1e-10);
      }
    }
  }
  const auto bubble = RadialField::bubble({5, 1.0, 1.0});
  CHECK(pde_residual(bubble.scaled(1.1), 5, 1.0, 50.0, 500).sup >= 0.1);
  const auto one = pde_residual(RadialField::constant(1.0), 5, 1.0, 10.0, 100);
  CHECK(one.sup == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed-form derivatives agree with finite differences") {
  const auto fields = {RadialField::bubble({6, 1.4, 1.0}), RadialField::gaussian(2.0, 0.7),
                       RadialField::inverse_power(1.5, 0.8, 3.0)};
  for (const auto& f : fields) {
    for (double r : {0.5, 1.3, 2.9}) {
      CHECK(f.derivative(2, r) == doctest::Approx(fd2(f, r, 1e-3)).epsilon(1e-6));
    }
  }
}

TEST_CASE("closed-form bilaplacian matches the radial derivative formula") {
  for (int n : {5, 6, 9}) {
    const auto g = RadialField::gaussian(1.3, 0.6);
    // a generic field built without the closed forms, so bilaplacian uses the derivative rule
    const RadialField plain("plain", {[&](double r) { return g.derivative(0, r); },
                                      [&](double r) { return g.derivative(1, r); },
                                      [&](double r) { return g.derivative(2, r); },
                                      [&](double r) { return g.derivative(3, r); },
                                      [&](double r) { return g.derivative(4, r); }});
    for (double r : {0.0, 1e-4, 0.2, 1.0, 2.5}) {
      const double closed = g.bilaplacian(n, r);
      // the small-r series and the cancelling derivative formula both lose about 1e-8 near r = 1e-4
      CHECK(plain.bilaplacian(n, r) == doctest::Approx(closed).epsilon(r > 0.0 && r < 1e-3 ? 1e-6 : 1e-8));
    }
    const auto b = RadialField::bubble({n, 1.0, 1.0});
    const RadialField plainb("plain", {[&](double r) { return b.derivative(0, r); },
                                       [&](double r) { return b.derivative(1, r); },
                                       [&](double r) { return b.derivative(2, r); },
                                       [&](double r) { return b.derivative(3, r); },
                                       [&](double r) { return b.derivative(4, r); }});
    for (double r : {0.3, 1.0, 4.0}) {
      CHECK(plainb.bilaplacian(n, r) == doctest::Approx(b.bilaplacian(n, r)).epsilon(1e-9));
    }
  }
}

TEST_CASE("inverse power sums") {
  const InversePowerSum s(1.5, {{2.0, 1.0}, {3.0, -0.5}});
  const double r = 0.7;
  const double q = 1.0 + 2.25 * r * r;
  CHECK(s(r) == doctest::Approx(std::pow(q, -2.0) - 0.5 * std::pow(q, -3.0)).epsilon(1e-15));
  // derivative(1) from the closed rule vs d/dr by hand
  const double d1 = -2.0 * 2.0 * 2.25 * r * std::pow(q, -3.0) + 0.5 * 3.0 * 2.0 * 2.25 * r * std::pow(q, -4.0);
  CHECK(s.derivative(1, r) == doctest::Approx(d1).epsilon(1e-14));
  const auto lap = s.laplacian(5);
  const double direct = s.derivative(2, r) + 4.0 / r * s.derivative(1, r);
  CHECK(lap(r) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("bubble energy") {
  const auto e5 = bubble_energy({5, 1.0, 1.0});
  const double k5 = std::pow(sharp_constant(5).k0_inv_sq, 1.25);
  CHECK(e5.value == doctest::Approx(325.7).epsilon(1e-4));
  CHECK(std::abs(e5.value - k5) / k5 <= 1e-10);
  CHECK(std::abs(e5.value - energy_oracle(5, 1.0)) / e5.value <= 1e-12);
  CHECK(e5.converged);
  const auto e5b = bubble_energy({5, 2.0, 1.0});
  CHECK(std::abs(e5b.value - e5.value) / e5.value <= 1e-8);
  const auto e8 = bubble_energy({8, 1.0, 1.0});
  CHECK(e8.value == doctest::Approx(std::pow(653.8, 2.0)).epsilon(1e-3));
  for (int n : {6, 7, 9, 12}) {
    for (double li : {1.0, 2.5}) {
      const auto e = bubble_energy({n, 0.7, li});
      CHECK(std::abs(e.value - energy_oracle(n, li)) / e.value <= 1e-10);
      CHECK(e.relative_error <= 1e-10);
    }
  }
}

TEST_CASE("pohozaev identity") {
  CHECK(std::abs(pohozaev_identity_residual(RadialField::gaussian(1.0, 1.0), 5, 12.0).residual) <= 1e-8);
  CHECK(std::abs(pohozaev_identity_residual(RadialField::inverse_power(1.0, 1.0, 4.0), 5, 200.0, 2000).residual) <= 1e-6);

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> amp(-2.0, 2.0), width(0.3, 3.0);
  std::uniform_int_distribution<int> dim(5, 10);
  for (int i = 0; i < 10; ++i) {
    const int n = dim(rng);
    RadialField w = RadialField::gaussian(amp(rng), width(rng));
    w = w + RadialField::gaussian(amp(rng), width(rng));
    const auto res = pohozaev_identity_residual(w, n, 15.0);
    CHECK(std::abs(res.residual) <= 1e-6);
    CHECK_FALSE(res.decay_warning);
  }

  // the truncated bubble residual tends to zero as the radius grows
  const auto b = RadialField::bubble({5, 1.0, 1.0});
  double last = INFINITY;
  for (double radius : {10.0, 20.0, 40.0}) {
    const auto res = pohozaev_identity_residual(b, 5, radius, 800);
    CHECK(std::abs(res.residual) < last);
    CHECK(res.decay_warning);
    last = std::abs(res.residual);
  }
}

TEST_CASE("pohozaev witness") {
  const auto b = RadialField::bubble({5, 1.0, 1.0});
  CHECK(pohozaev_witness(b, 5, 0.0, 0.0, 50.0) == 0.0);
  CHECK(pohozaev_witness(RadialField::zero(), 5, 1.0, 1.0, 50.0) == 0.0);
  const double w = pohozaev_witness(b, 5, 1.0, 0.0, 50.0);
  const double dirichlet = pohozaev_identity_residual(b, 5, 50.0).dirichlet;
  CHECK(w > 0.1 * dirichlet);
  CHECK_THROWS_AS(pohozaev_witness(b, 5, -1.0, 0.0, 50.0), DomainError);
}

}
