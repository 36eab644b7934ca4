#include "paneitz/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "paneitz/bubble.hpp"
#include "paneitz/errors.hpp"
#include "paneitz/quadrature.hpp"

namespace paneitz {

namespace {

void check_delta(const PeriodicField& u, double delta) {
  if (!(delta > 0.0) || !(delta < 0.5 * u.spec().period())) {
    throw DomainError("delta must satisfy 0 < delta < L/2");
  }
}

}  // namespace

HessianRatio hessian_ratio(const PeriodicField& u, const OperatorParams& params, double delta) {
  check_delta(u, delta);
  const auto report = norms(u, params);
  if (!(report.l2 > 0.0)) throw DomainError("hessian ratio is undefined for u = 0");
  const double center = u.argmax();
  const double outside = localized_mass(u, center, delta, MassKind::hess_l2, Region::complement);
  const double value = std::max(outside, 0.0) / report.l2;
  return {value, value / params.a()};
}

ConcentrationReport concentration_ratios(const PeriodicField& u, const OperatorParams& params,
                                         double delta) {
  check_delta(u, delta);
  const auto totals = norms(u, params);
  if (!(totals.l2 > 0.0)) throw DomainError("concentration ratios are undefined for u = 0");
  ConcentrationReport r;
  r.center = u.argmax();
  r.delta = delta;
  r.resolution = localized_mass_resolution(u);

  const double l2_out = localized_mass(u, r.center, delta, MassKind::l2, Region::complement);
  r.r_l2 = std::clamp(l2_out / totals.l2, 0.0, 1.0);

  const double grad_out =
      std::max(localized_mass(u, r.center, delta, MassKind::grad_l2, Region::complement), 0.0);
  r.r_grad_l2_weak = grad_out / totals.l2;
  // gradient mass below rounding of the L2 mass counts as no gradient
  r.r_grad_l2_defined = totals.grad_l2 > 1e-24 * totals.l2;
  r.r_grad_l2 = r.r_grad_l2_defined ? std::clamp(grad_out / totals.grad_l2, 0.0, 1.0)
                                    : std::numeric_limits<double>::quiet_NaN();
  r.r_strong = r.r_grad_l2;
  r.r_strong_supported = u.spec().dimension() >= 8;

  const double hess_out =
      std::max(localized_mass(u, r.center, delta, MassKind::hess_l2, Region::complement), 0.0);
  r.hessian_ratio = hess_out / totals.l2;
  r.hessian_ratio_over_a = r.hessian_ratio / params.a();
  return r;
}

std::vector<ConcentrationPoint> concentration_points(const PeriodicField& u, double delta,
                                                     double theta) {
  check_delta(u, delta);
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  std::vector<ConcentrationPoint> out;
  const double total = energy(u);
  if (!(total > 0.0)) return out;

  const int fine = 16 * u.modes();
  const auto vals = inverse(u.coefficients(), fine);
  const double vmax = *std::max_element(vals.begin(), vals.end());
  const double vmin = *std::min_element(vals.begin(), vals.end());
  if (!(vmax - vmin > 1e-12 * std::abs(vmax))) return out;

  const double h = u.spec().period() / fine;
  const auto at = [&](int j) { return vals[static_cast<std::size_t>((j % fine + fine) % fine)]; };
  for (int j = 0; j < fine; ++j) {
    // plateau-safe strict local maximum: higher than the left neighbour, not lower than the right
    if (!(at(j) > at(j - 1) && at(j) >= at(j + 1))) continue;
    // parabolic refinement through the three samples
    const double denom = at(j - 1) - 2.0 * at(j) + at(j + 1);
    const double offset = denom < 0.0 ? 0.5 * (at(j - 1) - at(j + 1)) / denom : 0.0;
    double s = (j + offset) * h;
    s = std::fmod(s + u.spec().period(), u.spec().period());
    const double mass = localized_mass(u, s, delta, MassKind::energy) / total;
    if (mass >= theta) out.push_back({s, mass});
  }
  return out;
}

SyntheticBubbles synthetic_bubble_energy(int n, int k, double separation, double lambda0,
                                         double lambda_inf, int panels) {
  if (k < 1) throw DomainError("need at least one bubble");
  if (k > 1 && !(separation > 0.0)) throw DomainError("bubble separation must be positive");
  BubbleParams params{n, lambda0, lambda_inf};
  params.validate();
  const double two_sharp = critical_exponent(n);
  const double peak = bubble_peak(params);
  const double beta = 0.5 * (n - 4);
  const double l2 = lambda0 * lambda0;
  std::vector<double> centers(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) centers[static_cast<std::size_t>(i)] = i * separation;

  // integral over the orthogonal R^{n-1} of (sum v_i)^{2#} at axial coordinate z
  const auto slice = [&](double z) {
    const auto density = [&](double rho) {
      double sum = 0.0;
      for (const double c : centers) {
        const double d2 = rho * rho + (z - c) * (z - c);
        sum += peak * std::pow(1.0 + l2 * d2, -beta);
      }
      return std::pow(sum, two_sharp) * std::pow(rho, n - 2);
    };
    return sphere_volume(n - 2) * integrate_half_line(density, lambda0, panels);
  };

  // Axial pieces: from each center outwards to the midpoint with its neighbour (or to infinity),
  // each mapped by z = c +- tan(theta) / lambda0.
  const double half_pi = 0.5 * std::numbers::pi;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double c = centers[static_cast<std::size_t>(i)];
    for (const int side : {-1, 1}) {
      const bool open = (side < 0 && i == 0) || (side > 0 && i == k - 1);
      const double top = open ? half_pi : std::atan(lambda0 * 0.5 * separation);
      const auto mapped = [&](double theta) {
        const double cs = std::cos(theta);
        return slice(c + side * std::tan(theta) / lambda0) / (lambda0 * cs * cs);
      };
      total += integrate_panels(mapped, 0.0, top, panels);
    }
  }

  SyntheticBubbles out;
  out.k = k;
  out.separation = separation;
  out.energy = total;
  out.expected = k * std::pow(sharp_constant(n).k0_inv_sq / lambda_inf, 0.25 * n);
  out.relative_deviation = (out.energy - out.expected) / out.expected;
  out.within_tolerance = std::abs(out.relative_deviation) <= 0.02;
  return out;
}

QuantizationReport quantization_check(int n, double budget, double lambda_inf, int synthetic_k,
                                      double separation_factor, double lambda0) {
  if (!(budget > 0.0)) throw DomainError("energy budget must be positive");
  if (!(lambda_inf > 0.0)) throw DomainError("lambda_inf must be positive");
  QuantizationReport r;
  r.unit_energy = std::pow(sharp_constant(n).k0_inv_sq / lambda_inf, 0.25 * n);
  // a budget of exactly k quanta must count k despite rounding in the ratio
  r.k_max = static_cast<int>(std::floor(budget / r.unit_energy * (1.0 + 1e-12)));
  r.synthetic = synthetic_bubble_energy(n, synthetic_k, separation_factor / lambda0, lambda0,
                                        lambda_inf);
  return r;
}

}  // namespace paneitz
