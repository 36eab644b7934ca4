#include "paneitz/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "paneitz/errors.hpp"

namespace paneitz {

namespace {
using Rule = boost::math::quadrature::gauss<double, 20>;
}

double integrate_panels(const Integrand& f, double lo, double hi, int panels) {
  if (panels < 1) throw DomainError("quadrature needs at least one panel");
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double b = (p + 1 == panels) ? hi : a + h;
    sum += Rule::integrate(f, a, b);
  }
  return sum;
}

double integrate_half_line(const Integrand& f, double scale, int panels) {
  if (!(scale > 0.0)) throw DomainError("half-line quadrature scale must be positive");
  const auto mapped = [&](double theta) {
    const double c = std::cos(theta);
    const double r = std::tan(theta) / scale;
    return f(r) / (scale * c * c);
  };
  return integrate_panels(mapped, 0.0, 0.5 * std::numbers::pi, panels);
}

}  // namespace paneitz
