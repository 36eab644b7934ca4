#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace paneitz {

/// Parameters of the radial solution of Delta^2 v = lambda_inf v^{2#-1} on R^n:
///   lambda_inf^{1/(2#-2)} v(x) = c_n (lambda0 / (1 + lambda0^2 |x - x0|^2))^{(n-4)/2}.
struct BubbleParams {
  int n = 5;
  double lambda0 = 1.0;
  double lambda_inf = 1.0;
  std::vector<double> x0{};  ///< center; empty means the origin

  /// Throws DomainError on n < 5 or nonpositive scales.
  void validate() const;
};

/// v(0) = lambda_inf^{-1/(2#-2)} c_n lambda0^{(n-4)/2}.
double bubble_peak(const BubbleParams& p);

/// Bubble value at distance r >= 0 from its center.
double bubble_eval(const BubbleParams& p, double r);

/// Bubble value at a point x of R^n; an empty x0 means the origin.
double bubble_eval_at(const BubbleParams& p, std::span<const double> x);

/// Finite sum of c * q^{-gamma}, q = 1 + s^2 r^2, kept in canonical form (one
/// coefficient per exponent) so that the radial Laplacian is exact algebra.
class InversePowerSum {
public:
  InversePowerSum(double scale, std::map<double, double> terms);

  double scale() const noexcept { return scale_; }
  const std::map<double, double>& terms() const noexcept { return terms_; }

  double operator()(double r) const;
  /// k-th radial derivative, k <= 4, from the closed-form rule
  /// d/dr (r^j q^{-g}) = j r^{j-1} q^{-g} - 2 g s^2 r^{j+1} q^{-g-1}.
  double derivative(int k, double r) const;
  /// Delta_rad = d^2/dr^2 + (n-1)/r d/dr, using
  /// Delta_rad q^{-g} = s^2 [2g(2g+2-n) q^{-g-1} - 4g(g+1) q^{-g-2}].
  InversePowerSum laplacian(int n) const;

private:
  double scale_;
  std::map<double, double> terms_;
};

/// Radial samples of a field; radii strictly increasing and values finite.
struct RadialSamples {
  std::vector<double> radii;
  std::vector<double> values;
};

/// Radial function on R^n with closed-form radial derivatives up to order four.
///
/// Laplacians use the analyst sign Delta f = f'' + (n-1) f'/r. Only Delta^2,
/// (Delta f)^2, |grad f|^2 and f^2 enter the bubble computations, so the sign
/// convention never shows in a result.
class RadialField {
public:
  using Fn = std::function<double(double)>;
  using DimFn = std::function<double(int, double)>;

  RadialField(std::string name, std::array<Fn, 5> derivatives, DimFn laplacian = {},
              DimFn bilaplacian = {});

  static RadialField bubble(const BubbleParams& p);
  /// amplitude * exp(-b r^2)
  static RadialField gaussian(double amplitude, double b);
  /// amplitude * (1 + s^2 r^2)^{-gamma}
  static RadialField inverse_power(double amplitude, double scale, double gamma);
  static RadialField constant(double c);
  static RadialField zero() { return constant(0.0); }

  const std::string& name() const noexcept { return name_; }
  double value(double r) const { return derivatives_[0](r); }
  /// k-th radial derivative for 0 <= k <= 4.
  double derivative(int k, double r) const;
  double laplacian(int n, double r) const;
  /// Closed form when available; otherwise
  /// f'''' + 2(n-1) f'''/r + (n-1)(n-3)(f''/r^2 - f'/r^3), and n(n+2)/3 f''''(0) near r = 0.
  double bilaplacian(int n, double r) const;

  RadialSamples sample(std::span<const double> radii) const;

  RadialField scaled(double c) const;
  friend RadialField operator+(const RadialField& lhs, const RadialField& rhs);

private:
  std::string name_;
  std::array<Fn, 5> derivatives_;
  DimFn laplacian_;
  DimFn bilaplacian_;
};

struct PdeResidual {
  double sup = 0.0;     ///< sup_j |Delta^2 v - lambda_inf v^{2#-1}| / v^{2#-1}
  double at_radius = 0.0;
};

/// Relative residual of Delta^2 w = lambda_inf w^{2#-1} on r_j = rmax j / gridsize, j = 0..gridsize.
PdeResidual pde_residual(const RadialField& w, int n, double lambda_inf, double rmax,
                         int gridsize);
PdeResidual pde_residual(const BubbleParams& p, double rmax, int gridsize);

struct QuadratureOptions {
  int panels = 24;
  double tolerance = 1e-10;
};

struct BubbleEnergy {
  double value = 0.0;     ///< integral of v^{2#} over R^n
  double expected = 0.0;  ///< (lambda_inf K0^2)^{-n/4}
  double relative_error = 0.0;
  double refinement_change = 0.0;  ///< relative change when the panel count is doubled
  bool converged = false;
};

BubbleEnergy bubble_energy(const BubbleParams& p, const QuadratureOptions& opts = {});

/// Integral over the ball B_R of |x|^{n-1}-weighted radial density f(r).
double radial_ball_integral(const std::function<double(double)>& density, int n, double radius,
                            int panels);

struct PohozaevResidual {
  double transport = 0.0;  ///< integral of Delta^2 w (x . grad w) over B_R
  double dirichlet = 0.0;  ///< integral of (Delta w)^2 over B_R
  double residual = 0.0;   ///< (transport + (n-4)/2 dirichlet) / dirichlet
  double tail_fraction = 0.0;  ///< share of the dirichlet integral carried by [R/2, R]
  bool decay_warning = false;
};

/// Pohozaev scaling identity integral of Delta^2 w (x . grad w) + (n-4)/2 (Delta w)^2 over B_R,
/// normalized by the integral of (Delta w)^2. Zero for every rapidly decaying w.
PohozaevResidual pohozaev_identity_residual(const RadialField& w, int n, double rmax,
                                            int panels = 400);

/// lambda * int_{B_R} |grad w|^2 + 2 mu * int_{B_R} w^2. A strictly positive value on a
/// solution of Delta^2 u + lambda Delta u + mu u = u^{2#-1} (Delta = -div grad there) rules
/// that solution out.
double pohozaev_witness(const RadialField& w, int n, double lambda, double mu, double radius,
                        int panels = 400);

}  // namespace paneitz
