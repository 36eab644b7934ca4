#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "paneitz/constants.hpp"
#include "paneitz/geometry.hpp"

namespace paneitz {

using Complex = std::complex<double>;

/// Coefficients u_m, m = 0..max_mode, of u(s_j) = sum_{|m|<=K} u_m exp(2 pi i m j / G).
/// Throws DomainError unless values.size() > 2 * max_mode.
std::vector<Complex> transform(std::span<const double> values, int max_mode);

/// Samples on a grid of grid_size points of the real field with coefficients
/// coeffs[m], m >= 0, and u_{-m} = conj(u_m). Throws DomainError unless grid_size > 2 * K.
std::vector<double> inverse(std::span<const Complex> coeffs, int grid_size);

/// Full normalized DFT (all G coefficients, index m taken mod G).
std::vector<Complex> full_spectrum(std::span<const double> values);

/// Real function on S^1(t) x S^{n-1} constant along the sphere factor.
///
/// Holds Fourier coefficients for |m| <= N/2 (N = modes(), even, >= 16) and the
/// samples on the uniform grid of 2N points, which oversamples the highest mode by
/// a factor four for pointwise nonlinearities.
class PeriodicField {
public:
  /// Coefficients u_0..u_K; N = 2K. The imaginary part of u_0 is discarded.
  static PeriodicField from_coefficients(const ManifoldSpec& spec, std::vector<Complex> coeffs);
  /// Samples on the 2N-point grid, kept verbatim as the field's grid values.
  static PeriodicField from_values(const ManifoldSpec& spec, std::vector<double> values);
  /// L2 projection of f (a function of arc length) onto the first N modes.
  static PeriodicField from_function(const ManifoldSpec& spec, int modes,
                                     const std::function<double(double)>& f);
  static PeriodicField constant(const ManifoldSpec& spec, int modes, double value);

  const ManifoldSpec& spec() const noexcept { return spec_; }
  int modes() const noexcept { return 2 * max_mode_; }
  int max_mode() const noexcept { return max_mode_; }
  int grid_size() const noexcept { return 4 * max_mode_; }
  QuadratureGrid grid() const { return QuadratureGrid(grid_size(), spec_.period()); }
  /// Angular wavenumber of mode 1, 2 pi / L = 1 / t.
  double wavenumber() const noexcept { return 1.0 / spec_.radius(); }

  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  /// u_m for any integer m; conj(u_{-m}) for m < 0 and zero beyond N/2.
  Complex coefficient(int m) const noexcept;
  std::span<const double> values() const noexcept { return values_; }

  /// Spectral interpolant at arc length s.
  double operator()(double s) const;

  /// d^order u / ds^order.
  PeriodicField derivative(int order) const;
  /// Truncated or zero-padded to another mode count.
  PeriodicField resampled(int modes) const;
  /// s -> u(s + ds).
  PeriodicField shifted(double ds) const;
  PeriodicField scaled(double factor) const;

  double min_value() const;
  double max_value() const;
  /// Arc length in [0, L) of the global maximum, refined beyond grid resolution.
  double argmax() const;
  /// Sum over m != 0 of |u_m|^2 relative to |u_0|^2.
  double relative_variance() const;
  /// Sum of |u_m| over |m| > N/4 relative to the sum over all m.
  double tail_fraction() const;

private:
  PeriodicField(const ManifoldSpec& spec, std::vector<Complex> coeffs, std::vector<double> values);

  ManifoldSpec spec_;
  int max_mode_;
  std::vector<Complex> coeffs_;
  std::vector<double> values_;
};

/// Full-manifold quadratic quantities (circle integral times |S^{n-1}|).
struct NormReport {
  double l2 = 0.0;       ///< integral of u^2
  double grad_l2 = 0.0;  ///< integral of |grad u|^2
  double hess_l2 = 0.0;  ///< integral of |Hess u|^2 = (u'')^2 on the flat product
  double energy = 0.0;   ///< E(u) = integral of |u|^{2#}
  double l2sharp = 0.0;  ///< E(u)^{1/2#}
  double pairing = 0.0;  ///< <P u, u> with P = Delta^2 + alpha Delta + a
};

NormReport norms(const PeriodicField& u, const OperatorParams& params);

/// Integral of |u|^{2#} over the manifold, by the grid rule.
double energy(const PeriodicField& u);
/// <P u, u> from the coefficients.
double pairing(const PeriodicField& u, const OperatorParams& params);
/// Integral of u^2 by the grid rule (for Parseval checks against NormReport::l2).
double l2_on_grid(const PeriodicField& u);

enum class MassKind { l2, grad_l2, hess_l2, energy };
enum class Region { ball, complement };

/// Integral of the chosen density over {s : dist(s, center) < delta} (or its complement)
/// times |S^{n-1}|. The density is interpolated on a grid 16x finer than the mode count
/// and integrated exactly over the arc, so the indicator is sharp.
/// Throws DomainError unless 0 < delta < L/2.
double localized_mass(const PeriodicField& u, double center, double delta, MassKind kind,
                      Region region = Region::ball);

/// Grid spacing of the density interpolation used by localized_mass.
double localized_mass_resolution(const PeriodicField& u);

/// Two-column text format: header "# n t N", then 2N lines "s_j u_j", all with 17
/// significant digits so that values round-trip exactly.
void write_field(std::ostream& out, const PeriodicField& u);
PeriodicField read_field(std::istream& in);
void save_field(const std::filesystem::path& path, const PeriodicField& u);
/// Throws InputError if the file is missing or malformed.
PeriodicField load_field(const std::filesystem::path& path);

}  // namespace paneitz
