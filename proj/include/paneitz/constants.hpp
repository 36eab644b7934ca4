#pragma once

#include <functional>
#include <string>
#include <vector>

namespace paneitz {

/// 2n/(n-4). Throws DomainError for n < 5.
double critical_exponent(int n);

struct SharpConstant {
  double k0;         ///< best constant in ||phi||_{2#} <= K0 ||Delta phi||_2 on R^n
  double k0_inv_sq;  ///< K0^{-2}
};

/// K0^{-2} = pi^2 n (n-4) (n^2-4) Gamma(n/2)^{4/n} Gamma(n)^{-4/n}.
SharpConstant sharp_constant(int n);

/// c_n = (n (n-4) (n^2-4))^{(n-4)/8}, the amplitude of the Euclidean bubble.
double bubble_coefficient(int n);

struct EinsteinCoefficients {
  double alpha;
  double a;
};

/// Coefficients of the Paneitz-Branson operator of an Einstein metric with scalar curvature S.
EinsteinCoefficients einstein_coefficients(int n, double scalar_curvature);

/// P = Delta^2 + alpha Delta + a = (Delta + c)(Delta + d) with c >= d > 0.
class OperatorParams {
public:
  /// Throws DomainError for alpha <= 0 or a <= 0, FactorizationError for a > alpha^2/4.
  OperatorParams(double alpha, double a);

  /// The schedule a = alpha^2/4 of the model equation (Delta + alpha/2)^2 u = u^{2#-1}.
  static OperatorParams model(double alpha) { return OperatorParams(alpha, 0.25 * alpha * alpha); }

  double alpha() const noexcept { return alpha_; }
  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  /// mu^2 + alpha mu + a for an eigenvalue mu of Delta.
  double symbol(double mu) const noexcept { return mu * mu + alpha_ * mu + a_; }

private:
  double alpha_, a_, c_, d_;
};

struct Factorization {
  double c;
  double d;
};

/// Roots of x^2 - alpha x + a: c = alpha/2 + sqrt(alpha^2/4 - a), d = a / c.
Factorization factorize(double alpha, double a);

struct ConstantBranch {
  double u_bar;   ///< a^{(n-4)/8}, the positive constant with a u = u^{2#-1}
  double energy;  ///< u_bar^{2#} V = a^{n/4} V
};

ConstantBranch constant_branch(int n, double a, double volume);

struct ScheduleEntry {
  double alpha;
  double a;
  bool a1_ok;    ///< a <= alpha^2 / 4
  double ratio;  ///< a / alpha
};

struct ScheduleReport {
  std::vector<ScheduleEntry> entries;
  bool a1_ok = false;  ///< every entry satisfies a <= alpha^2/4
  /// a/alpha strictly increasing on the grid and last/first >= 10. A finite-grid
  /// stand-in for a/alpha -> infinity; it says nothing about the limit itself.
  bool a2_proxy_ok = false;
  double a2_growth = 0.0;  ///< last ratio / first ratio
  std::string a2_label = "proxy";
  bool verdict() const noexcept { return a1_ok && a2_proxy_ok; }
};

/// Throws DomainError unless the grid is nonempty, strictly increasing and positive.
ScheduleReport validate_schedule(const std::function<double(double)>& a_of_alpha,
                                 const std::vector<double>& grid);

}  // namespace paneitz
