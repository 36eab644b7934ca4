#pragma once

#include <functional>

namespace paneitz {

using Integrand = std::function<double(double)>;

/// Composite 20-point Gauss-Legendre rule with `panels` equal panels on [lo, hi].
double integrate_panels(const Integrand& f, double lo, double hi, int panels);

/// Integral of f over [0, inf) after the substitution r = tan(theta) / scale,
/// theta in [0, pi/2). `scale` should be the inverse length over which f varies.
/// The integrand is assumed to decay faster than r^{-1}.
double integrate_half_line(const Integrand& f, double scale, int panels);

}  // namespace paneitz
