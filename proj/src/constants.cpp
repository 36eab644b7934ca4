#include "paneitz/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "paneitz/errors.hpp"

namespace paneitz {

namespace {

void require_dimension(int n) {
  if (n < 5) {
    throw DomainError("dimension must be >= 5 for a critical exponent 2n/(n-4), got " +
                      std::to_string(n));
  }
}

}  // namespace

double critical_exponent(int n) {
  require_dimension(n);
  return 2.0 * n / (n - 4);
}

SharpConstant sharp_constant(int n) {
  require_dimension(n);
  const double nd = n;
  // Gamma(n/2)^{4/n} Gamma(n)^{-4/n} through log-gamma; both arguments are positive.
  const double gamma_part = std::exp(4.0 / nd * (std::lgamma(0.5 * nd) - std::lgamma(nd)));
  const double k0_inv_sq = std::numbers::pi * std::numbers::pi * nd * (nd - 4.0) *
                           (nd * nd - 4.0) * gamma_part;
  return {1.0 / std::sqrt(k0_inv_sq), k0_inv_sq};
}

double bubble_coefficient(int n) {
  require_dimension(n);
  const double nd = n;
  return std::pow(nd * (nd - 4.0) * (nd * nd - 4.0), (nd - 4.0) / 8.0);
}

EinsteinCoefficients einstein_coefficients(int n, double s) {
  require_dimension(n);
  const double nd = n;
  const double alpha = (nd * nd - 2.0 * nd - 4.0) / (2.0 * nd * (nd - 1.0)) * s;
  const double a = (nd - 4.0) * (nd * nd - 4.0) / (16.0 * nd * (nd - 1.0) * (nd - 1.0)) * s * s;
  return {alpha, a};
}

Factorization factorize(double alpha, double a) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(a > 0.0)) throw DomainError("a must be positive");
  const double disc = 0.25 * alpha * alpha - a;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "a = " << a << " exceeds alpha^2/4 = " << 0.25 * alpha * alpha
        << "; Delta^2 + alpha Delta + a has no real factorization";
    throw FactorizationError(msg.str());
  }
  const double c = 0.5 * alpha + std::sqrt(disc);
  // d from the product avoids cancellation in alpha/2 - sqrt(...)
  return {c, a / c};
}

OperatorParams::OperatorParams(double alpha, double a) : alpha_(alpha), a_(a) {
  const auto f = factorize(alpha, a);
  c_ = f.c;
  d_ = f.d;
}

ConstantBranch constant_branch(int n, double a, double volume) {
  require_dimension(n);
  if (!(a > 0.0)) throw DomainError("a must be positive");
  if (!(volume > 0.0)) throw DomainError("volume must be positive");
  const double nd = n;
  const double u_bar = std::pow(a, (nd - 4.0) / 8.0);
  return {u_bar, std::pow(a, nd / 4.0) * volume};
}

ScheduleReport validate_schedule(const std::function<double(double)>& a_of_alpha,
                                 const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("schedule grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("schedule grid values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("schedule grid must be strictly increasing");
    }
  }
  ScheduleReport report;
  report.a1_ok = true;
  report.a2_proxy_ok = grid.size() >= 2;
  for (const double alpha : grid) {
    const double a = a_of_alpha(alpha);
    ScheduleEntry e{alpha, a, a <= 0.25 * alpha * alpha, a / alpha};
    report.a1_ok = report.a1_ok && e.a1_ok;
    if (!report.entries.empty() && !(e.ratio > report.entries.back().ratio)) {
      report.a2_proxy_ok = false;
    }
    report.entries.push_back(e);
  }
  const double first = report.entries.front().ratio;
  report.a2_growth = report.entries.back().ratio / first;
  if (!(first > 0.0) || !(report.a2_growth >= 10.0)) report.a2_proxy_ok = false;
  return report;
}

}  // namespace paneitz
