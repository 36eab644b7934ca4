#include "paneitz/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paneitz/constants.hpp"
#include "paneitz/errors.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/quadrature.hpp"

namespace paneitz {

void BubbleParams::validate() const {
  if (n < 5) throw DomainError("bubble dimension must be >= 5");
  if (!(lambda0 > 0.0)) throw DomainError("lambda0 must be positive");
  if (!(lambda_inf > 0.0)) throw DomainError("lambda_inf must be positive");
  if (!x0.empty() && x0.size() != static_cast<std::size_t>(n)) {
    throw DomainError("bubble center must have n coordinates");
  }
}

double bubble_peak(const BubbleParams& p) {
  p.validate();
  const double two_sharp = critical_exponent(p.n);
  return std::pow(p.lambda_inf, -1.0 / (two_sharp - 2.0)) * bubble_coefficient(p.n) *
         std::pow(p.lambda0, 0.5 * (p.n - 4));
}

double bubble_eval(const BubbleParams& p, double r) {
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  const double q = 1.0 + p.lambda0 * p.lambda0 * r * r;
  return bubble_peak(p) * std::pow(q, -0.5 * (p.n - 4));
}

double bubble_eval_at(const BubbleParams& p, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(p.n)) {
    throw DomainError("point must have n coordinates");
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = p.x0.empty() ? 0.0 : p.x0[i];
    r2 += (x[i] - c) * (x[i] - c);
  }
  return bubble_eval(p, std::sqrt(r2));
}

// ---------------------------------------------------------------------------
// InversePowerSum

InversePowerSum::InversePowerSum(double scale, std::map<double, double> terms)
    : scale_(scale), terms_(std::move(terms)) {
  if (!(scale > 0.0)) throw DomainError("inverse power scale must be positive");
}

double InversePowerSum::operator()(double r) const {
  const double q = 1.0 + scale_ * scale_ * r * r;
  double sum = 0.0;
  for (const auto& [gamma, c] : terms_) sum += c * std::pow(q, -gamma);
  return sum;
}

namespace {

// c r^j q^{-g}
struct MixedTerm {
  double c;
  int j;
  double g;
};

std::vector<MixedTerm> differentiate(const std::vector<MixedTerm>& in, double s2) {
  std::vector<MixedTerm> out;
  out.reserve(2 * in.size());
  for (const auto& t : in) {
    if (t.j > 0) out.push_back({t.c * t.j, t.j - 1, t.g});
    out.push_back({-2.0 * t.g * s2 * t.c, t.j + 1, t.g + 1.0});
  }
  return out;
}

}  // namespace

double InversePowerSum::derivative(int k, double r) const {
  if (k < 0 || k > 4) throw DomainError("derivative order must be in 0..4");
  const double s2 = scale_ * scale_;
  std::vector<MixedTerm> terms;
  for (const auto& [gamma, c] : terms_) terms.push_back({c, 0, gamma});
  for (int i = 0; i < k; ++i) terms = differentiate(terms, s2);
  const double q = 1.0 + s2 * r * r;
  double sum = 0.0;
  for (const auto& t : terms) sum += t.c * std::pow(r, t.j) * std::pow(q, -t.g);
  return sum;
}

InversePowerSum InversePowerSum::laplacian(int n) const {
  // f = q^{-g}: f' = -2g s^2 r q^{-g-1}, f'' = -2g s^2 q^{-g-1} + 4g(g+1) s^4 r^2 q^{-g-2};
  // with s^2 r^2 = q - 1, f'' + (n-1) f'/r collapses to pure powers of q.
  const double s2 = scale_ * scale_;
  std::map<double, double> out;
  for (const auto& [g, c] : terms_) {
    const double first = c * s2 * 2.0 * g * (2.0 * g + 2.0 - n);
    const double second = -c * s2 * 4.0 * g * (g + 1.0);
    out[g + 1.0] += first;
    out[g + 2.0] += second;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return InversePowerSum(scale_, std::move(out));
}

// ---------------------------------------------------------------------------
// RadialField

RadialField::RadialField(std::string name, std::array<Fn, 5> derivatives, DimFn laplacian,
                         DimFn bilaplacian)
    : name_(std::move(name)),
      derivatives_(std::move(derivatives)),
      laplacian_(std::move(laplacian)),
      bilaplacian_(std::move(bilaplacian)) {}

namespace {

RadialField from_inverse_powers(std::string name, const InversePowerSum& f) {
  std::array<RadialField::Fn, 5> d;
  for (int k = 0; k < 5; ++k) {
    d[static_cast<std::size_t>(k)] = [f, k](double r) { return f.derivative(k, r); };
  }
  auto lap = [f](int n, double r) { return f.laplacian(n)(r); };
  auto bilap = [f](int n, double r) { return f.laplacian(n).laplacian(n)(r); };
  return RadialField(std::move(name), std::move(d), lap, bilap);
}

}  // namespace

RadialField RadialField::bubble(const BubbleParams& p) {
  const double amplitude = bubble_peak(p);
  InversePowerSum f(p.lambda0, {{0.5 * (p.n - 4), amplitude}});
  return from_inverse_powers("bubble", f);
}

RadialField RadialField::inverse_power(double amplitude, double scale, double gamma) {
  InversePowerSum f(scale, {{gamma, amplitude}});
  return from_inverse_powers("inverse_power", f);
}

RadialField RadialField::gaussian(double amplitude, double b) {
  if (!(b > 0.0)) throw DomainError("gaussian rate must be positive");
  const auto e = [b](double r) { return std::exp(-b * r * r); };
  std::array<Fn, 5> d{
      [=](double r) { return amplitude * e(r); },
      [=](double r) { return amplitude * (-2.0 * b * r) * e(r); },
      [=](double r) { return amplitude * (4.0 * b * b * r * r - 2.0 * b) * e(r); },
      [=](double r) { return amplitude * (-8.0 * b * b * b * r * r * r + 12.0 * b * b * r) * e(r); },
      [=](double r) {
        const double r2 = r * r;
        return amplitude * (16.0 * std::pow(b, 4) * r2 * r2 - 48.0 * b * b * b * r2 + 12.0 * b * b) *
               e(r);
      }};
  // Delta e^{-b r^2} = (4b^2 r^2 - 2bn) e^{-b r^2}
  auto lap = [=](int n, double r) {
    return amplitude * (4.0 * b * b * r * r - 2.0 * b * n) * e(r);
  };
  // Delta (r^2 e) = (2n - 2b(n+4) r^2 + 4b^2 r^4) e, hence
  // Delta^2 e = [16 b^4 r^4 - 16 b^3 (n+2) r^2 + 4 b^2 n (n+2)] e.
  auto bilap = [=](int n, double r) {
    const double r2 = r * r;
    return amplitude *
           (16.0 * std::pow(b, 4) * r2 * r2 - 16.0 * b * b * b * (n + 2) * r2 +
            4.0 * b * b * n * (n + 2)) *
           e(r);
  };
  return RadialField("gaussian", std::move(d), lap, bilap);
}

RadialField RadialField::constant(double c) {
  std::array<Fn, 5> d{[c](double) { return c; }, [](double) { return 0.0; },
                      [](double) { return 0.0; }, [](double) { return 0.0; },
                      [](double) { return 0.0; }};
  auto zero = [](int, double) { return 0.0; };
  return RadialField(c == 0.0 ? "zero" : "constant", std::move(d), zero, zero);
}

double RadialField::derivative(int k, double r) const {
  if (k < 0 || k > 4) throw DomainError("derivative order must be in 0..4");
  return derivatives_[static_cast<std::size_t>(k)](r);
}

double RadialField::laplacian(int n, double r) const {
  if (laplacian_) return laplacian_(n, r);
  if (r < 1e-8) return n * derivative(2, 0.0);
  return derivative(2, r) + (n - 1) * derivative(1, r) / r;
}

double RadialField::bilaplacian(int n, double r) const {
  if (bilaplacian_) return bilaplacian_(n, r);
  if (r < 1e-3) return n * (n + 2) / 3.0 * derivative(4, 0.0);
  const double f1 = derivative(1, r), f2 = derivative(2, r), f3 = derivative(3, r),
               f4 = derivative(4, r);
  return f4 + 2.0 * (n - 1) * f3 / r + (n - 1.0) * (n - 3.0) * (f2 / (r * r) - f1 / (r * r * r));
}

RadialSamples RadialField::sample(std::span<const double> radii) const {
  RadialSamples out;
  out.radii.assign(radii.begin(), radii.end());
  out.values.reserve(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0.0 || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw DomainError("sample radii must be nonnegative and strictly increasing");
    }
    const double v = value(radii[i]);
    if (!std::isfinite(v)) throw NumericalError("radial field is not finite at r = " +
                                                std::to_string(radii[i]));
    out.values.push_back(v);
  }
  return out;
}

RadialField RadialField::scaled(double c) const {
  std::array<Fn, 5> d;
  for (std::size_t k = 0; k < 5; ++k) {
    d[k] = [f = derivatives_[k], c](double r) { return c * f(r); };
  }
  DimFn lap, bilap;
  if (laplacian_) lap = [f = laplacian_, c](int n, double r) { return c * f(n, r); };
  if (bilaplacian_) bilap = [f = bilaplacian_, c](int n, double r) { return c * f(n, r); };
  return RadialField(name_, std::move(d), lap, bilap);
}

RadialField operator+(const RadialField& lhs, const RadialField& rhs) {
  std::array<RadialField::Fn, 5> d;
  for (std::size_t k = 0; k < 5; ++k) {
    d[k] = [f = lhs.derivatives_[k], g = rhs.derivatives_[k]](double r) { return f(r) + g(r); };
  }
  RadialField::DimFn lap, bilap;
  if (lhs.laplacian_ && rhs.laplacian_) {
    lap = [f = lhs.laplacian_, g = rhs.laplacian_](int n, double r) { return f(n, r) + g(n, r); };
  }
  if (lhs.bilaplacian_ && rhs.bilaplacian_) {
    bilap = [f = lhs.bilaplacian_, g = rhs.bilaplacian_](int n, double r) {
      return f(n, r) + g(n, r);
    };
  }
  return RadialField(lhs.name_ + "+" + rhs.name_, std::move(d), lap, bilap);
}

// ---------------------------------------------------------------------------
// Residuals and integrals

PdeResidual pde_residual(const RadialField& w, int n, double lambda_inf, double rmax,
                         int gridsize) {
  if (!(rmax > 0.0)) throw DomainError("rmax must be positive");
  if (gridsize < 1) throw DomainError("gridsize must be positive");
  const double power = critical_exponent(n) - 1.0;
  PdeResidual out;
  for (int j = 0; j <= gridsize; ++j) {
    const double r = rmax * j / gridsize;
    const double nonlinear = std::pow(std::max(w.value(r), 0.0), power);
    const double diff = std::abs(w.bilaplacian(n, r) - lambda_inf * nonlinear);
    const double rel = nonlinear > 0.0 ? diff / nonlinear : diff;
    if (rel > out.sup || j == 0) {
      out.sup = rel;
      out.at_radius = r;
    }
  }
  return out;
}

PdeResidual pde_residual(const BubbleParams& p, double rmax, int gridsize) {
  return pde_residual(RadialField::bubble(p), p.n, p.lambda_inf, rmax, gridsize);
}

BubbleEnergy bubble_energy(const BubbleParams& p, const QuadratureOptions& opts) {
  p.validate();
  const double two_sharp = critical_exponent(p.n);
  const double sphere = sphere_volume(p.n - 1);
  const auto density = [&](double r) {
    return std::pow(bubble_eval(p, r), two_sharp) * std::pow(r, p.n - 1);
  };
  BubbleEnergy out;
  const double coarse = sphere * integrate_half_line(density, p.lambda0, opts.panels);
  out.value = sphere * integrate_half_line(density, p.lambda0, 2 * opts.panels);
  out.refinement_change = std::abs(out.value - coarse) / std::abs(out.value);
  out.converged = out.refinement_change <= opts.tolerance;
  const double k0_inv_sq = sharp_constant(p.n).k0_inv_sq;
  // (lambda_inf K0^2)^{-n/4} = (K0^{-2} / lambda_inf)^{n/4}
  out.expected = std::pow(k0_inv_sq / p.lambda_inf, 0.25 * p.n);
  out.relative_error = std::abs(out.value - out.expected) / out.expected;
  return out;
}

double radial_ball_integral(const std::function<double(double)>& density, int n, double radius,
                            int panels) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const auto f = [&](double r) { return density(r) * std::pow(r, n - 1); };
  return sphere_volume(n - 1) * integrate_panels(f, 0.0, radius, panels);
}

PohozaevResidual pohozaev_identity_residual(const RadialField& w, int n, double rmax, int panels) {
  if (n < 5) throw DomainError("dimension must be >= 5");
  const auto transport_density = [&](double r) {
    return w.bilaplacian(n, r) * r * w.derivative(1, r);
  };
  const auto dirichlet_density = [&](double r) {
    const double l = w.laplacian(n, r);
    return l * l;
  };
  PohozaevResidual out;
  out.transport = radial_ball_integral(transport_density, n, rmax, panels);
  out.dirichlet = radial_ball_integral(dirichlet_density, n, rmax, panels);
  if (!(out.dirichlet > 0.0)) throw DomainError("Pohozaev residual needs a field with Delta w != 0");
  out.residual = (out.transport + 0.5 * (n - 4) * out.dirichlet) / out.dirichlet;
  const double inner = radial_ball_integral(dirichlet_density, n, 0.5 * rmax, panels);
  out.tail_fraction = (out.dirichlet - inner) / out.dirichlet;
  out.decay_warning = out.tail_fraction > 1e-8;
  return out;
}

double pohozaev_witness(const RadialField& w, int n, double lambda, double mu, double radius,
                        int panels) {
  if (lambda < 0.0 || mu < 0.0) throw DomainError("lambda and mu must be nonnegative");
  double total = 0.0;
  if (lambda != 0.0) {
    const auto grad = [&](double r) {
      const double g = w.derivative(1, r);
      return g * g;
    };
    total += lambda * radial_ball_integral(grad, n, radius, panels);
  }
  if (mu != 0.0) {
    const auto mass = [&](double r) {
      const double v = w.value(r);
      return v * v;
    };
    total += 2.0 * mu * radial_ball_integral(mass, n, radius, panels);
  }
  return total;
}

}  // namespace paneitz
