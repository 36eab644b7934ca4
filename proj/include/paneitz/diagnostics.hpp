#pragma once

#include <vector>

#include "paneitz/constants.hpp"
#include "paneitz/field.hpp"

namespace paneitz {

/// Concentration of u~ = u / ||u||_{2#} around its maximum s*. All ratios are
/// invariant under positive scaling of u, so u need not be normalized.
struct ConcentrationReport {
  double center = 0.0;  ///< s*, argmax of u
  double delta = 0.0;
  /// int_{M \ B_delta} u^2 / int_M u^2
  double r_l2 = 0.0;
  /// int_{M \ B_delta} |grad u|^2 / int_M |grad u|^2; NaN with r_grad_l2_defined = false
  /// when u has no gradient.
  double r_grad_l2 = 0.0;
  bool r_grad_l2_defined = false;
  /// int_{M \ B_delta} |grad u|^2 / int_M u^2, the gradient mass outside the ball measured
  /// against the L2 mass. Not confined to [0, 1].
  double r_grad_l2_weak = 0.0;
  /// Strong gradient ratio; it has the same normalization as r_grad_l2. Its decay is only
  /// established for n >= 8 and r_strong_supported records that.
  double r_strong = 0.0;
  bool r_strong_supported = false;
  double hessian_ratio = 0.0;         ///< int_{M \ B_delta} |Hess u|^2 / int_M u^2
  double hessian_ratio_over_a = 0.0;  ///< hessian_ratio / a
  double resolution = 0.0;            ///< grid spacing of the mass densities
};

/// Throws DomainError unless 0 < delta < L/2 and u != 0.
ConcentrationReport concentration_ratios(const PeriodicField& u, const OperatorParams& params,
                                         double delta);

struct HessianRatio {
  double value = 0.0;
  double over_a = 0.0;
};

HessianRatio hessian_ratio(const PeriodicField& u, const OperatorParams& params, double delta);

struct ConcentrationPoint {
  double position = 0.0;       ///< arc length of a local maximum
  double mass_fraction = 0.0;  ///< share of int u^{2#} within delta of it
};

/// Local maxima of u whose delta-neighbourhood carries at least theta of the L^{2#} mass.
/// Flat fields have no maxima.
std::vector<ConcentrationPoint> concentration_points(const PeriodicField& u, double delta,
                                                     double theta = 0.05);

struct SyntheticBubbles {
  int k = 0;
  double separation = 0.0;
  double energy = 0.0;    ///< integral over R^n of (sum of k bubbles)^{2#}
  double expected = 0.0;  ///< k (lambda_inf K0^2)^{-n/4}
  double relative_deviation = 0.0;
  bool within_tolerance = false;  ///< |deviation| <= 2%
};

/// k equal bubbles with centers on a line at spacing `separation`; the energy integral is
/// done in cylindrical coordinates about that line.
SyntheticBubbles synthetic_bubble_energy(int n, int k, double separation, double lambda0 = 1.0,
                                         double lambda_inf = 1.0, int panels = 24);

struct QuantizationReport {
  int k_max = 0;             ///< largest k with k (lambda_inf K0^2)^{-n/4} <= budget
  double unit_energy = 0.0;  ///< (lambda_inf K0^2)^{-n/4}
  SyntheticBubbles synthetic;
};

/// Bubble-count bound for an energy budget plus the synthetic additivity check with
/// `synthetic_k` bubbles at spacing separation_factor / lambda0.
QuantizationReport quantization_check(int n, double budget, double lambda_inf = 1.0,
                                      int synthetic_k = 2, double separation_factor = 20.0,
                                      double lambda0 = 1.0);

}  // namespace paneitz
