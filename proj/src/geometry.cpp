#include "paneitz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "paneitz/errors.hpp"

namespace paneitz {

ManifoldSpec::ManifoldSpec(int n, double t) : n_(n), t_(t), period_(2.0 * std::numbers::pi * t) {
  if (n < 5) {
    throw DomainError("manifold dimension must be >= 5, got " + std::to_string(n));
  }
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("circle radius must be positive and finite");
  }
}

QuadratureGrid::QuadratureGrid(int size, double period) : size_(size), period_(period) {
  if (size < 16 || size % 2 != 0) {
    throw DomainError("quadrature grid size must be even and >= 16, got " + std::to_string(size));
  }
  if (!(period > 0.0)) {
    throw DomainError("quadrature period must be positive");
  }
}

std::vector<double> QuadratureGrid::points() const {
  std::vector<double> s(static_cast<std::size_t>(size_));
  for (int j = 0; j < size_; ++j) s[static_cast<std::size_t>(j)] = point(j);
  return s;
}

double circle_eigenvalue(const ManifoldSpec& spec, int m) {
  if (m < 0) throw DomainError("mode index must be nonnegative");
  const double k = m / spec.radius();
  return k * k;
}

int circle_multiplicity(int m) { return m == 0 ? 1 : 2; }

namespace {

// Binomial coefficient, exact for the small arguments used by the spectrum.
long long binomial(long long top, long long bottom) {
  if (bottom < 0 || top < 0 || bottom > top) return 0;
  bottom = std::min(bottom, top - bottom);
  long long result = 1;
  for (long long i = 1; i <= bottom; ++i) {
    result = result * (top - bottom + i) / i;
  }
  return result;
}

}  // namespace

std::vector<SphereEigenvalue> sphere_spectrum(int d, int lmax) {
  if (d < 2) throw DomainError("sphere dimension must be >= 2");
  if (lmax < 0) throw DomainError("lmax must be nonnegative");
  std::vector<SphereEigenvalue> out;
  out.reserve(static_cast<std::size_t>(lmax) + 1);
  for (int l = 0; l <= lmax; ++l) {
    // dim of homogeneous harmonic polynomials of degree l in d+1 variables
    const long long mult = binomial(l + d, d) - binomial(l + d - 2, d);
    out.push_back({static_cast<double>(l) * (l + d - 1), mult});
  }
  return out;
}

double sphere_volume(int d) {
  if (d < 1) throw DomainError("sphere dimension must be >= 1");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double product_volume(const ManifoldSpec& spec) {
  return spec.period() * sphere_volume(spec.sphere_dimension());
}

}  // namespace paneitz
