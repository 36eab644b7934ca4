#pragma once

#include <vector>

namespace paneitz {

/// The model manifold S^1(t) x S^{n-1} with its product metric.
///
/// Functions on it are "circle-reduced": they depend on the arc length s in
/// [0, L) of the circle factor only, L = 2 pi t.
class ManifoldSpec {
public:
  /// Throws DomainError unless n >= 5 and t > 0.
  ManifoldSpec(int n, double t);

  int dimension() const noexcept { return n_; }
  double radius() const noexcept { return t_; }
  double period() const noexcept { return period_; }
  int sphere_dimension() const noexcept { return n_ - 1; }

  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;

private:
  int n_;
  double t_;
  double period_;
};

/// Uniform rule on [0, L): nodes s_j = j L / N, weights L / N.
class QuadratureGrid {
public:
  /// Throws DomainError unless N is even and N >= 16.
  QuadratureGrid(int size, double period);

  int size() const noexcept { return size_; }
  double period() const noexcept { return period_; }
  double weight() const noexcept { return period_ / size_; }
  double point(int j) const noexcept { return period_ * j / size_; }
  std::vector<double> points() const;

private:
  int size_;
  double period_;
};

/// Eigenvalue of Delta = -d^2/ds^2 on S^1(t) for the Fourier mode m: (m/t)^2.
double circle_eigenvalue(const ManifoldSpec& spec, int m);

/// 1 for m = 0, 2 otherwise.
int circle_multiplicity(int m);

struct SphereEigenvalue {
  double eigenvalue;
  long long multiplicity;
};

/// Spectrum of Delta on the unit sphere S^d for degrees 0..lmax:
/// l (l + d - 1) with the dimension of degree-l spherical harmonics.
std::vector<SphereEigenvalue> sphere_spectrum(int d, int lmax);

/// Volume of the unit sphere S^d in R^{d+1}.
double sphere_volume(int d);

/// Riemannian volume 2 pi t * |S^{n-1}| of the product.
double product_volume(const ManifoldSpec& spec);

}  // namespace paneitz
