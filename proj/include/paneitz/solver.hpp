#pragma once

#include <vector>

#include "paneitz/constants.hpp"
#include "paneitz/errors.hpp"
#include "paneitz/field.hpp"

namespace paneitz {

struct SolverOptions {
  int modes = 64;                    ///< N; the init is resampled to it
  double tolerance = 1e-11;          ///< on residual_sup (see below)
  int max_iterations = 50;
  int max_halvings = 30;             ///< backtracking steps per Newton iteration
  double positivity_penalty = 1e3;   ///< weight of the penalty on the negative part
  bool adapt_modes = false;          ///< double N until tail_fraction() <= tail_tolerance
  int max_modes = 512;
  double tail_tolerance = 1e-10;
  double constant_tolerance = 1e-8;  ///< relative variance below which a field counts as constant

  /// Throws DomainError on odd or too small mode counts and nonpositive tolerances.
  void validate() const;
};

/// A positive solution of u'''' - alpha u'' + a u = u^{2#-1} on the circle of length L.
struct Solution {
  PeriodicField field;
  OperatorParams params;
  double residual_sup = 0.0;
  double energy = 0.0;      ///< E(u) = integral of u^{2#}
  double pairing = 0.0;     ///< <P u, u>
  double energy_identity_residual = 0.0;  ///< |<Pu,u> - E(u)| / E(u)
  double lambda_quotient = 0.0;
  bool is_constant = false;
  int newton_iterations = 0;
  int modes = 0;
};

/// F(u) = Delta^2 u + alpha Delta u + a u - (u_+)^{2#-1}, linear part mode by mode and the
/// power on the 2N-point grid, projected back onto the field's modes.
PeriodicField residual(const PeriodicField& u, const OperatorParams& params);

/// sup over the grid of |F(u)| divided by max(1, sup u_+^{2#-1}).
double residual_sup(const PeriodicField& u, const OperatorParams& params);

/// Damped Newton iteration with a phase condition against translations. Throws
/// ConvergenceError (carrying the last residual) or PositivityError.
Solution newton_solve(const PeriodicField& init, const OperatorParams& params,
                      const SolverOptions& opts = {});

/// lambda(u) = <P u, u> / ||u||_{2#}^2. Throws DomainError for u = 0.
double quotient(const PeriodicField& u, const OperatorParams& params);

struct MinimizerOptions {
  double gradient_tolerance = 1e-8;  ///< relative P-norm of the preconditioned gradient
  int max_iterations = 20000;
  double initial_step = 0.2;
};

struct Minimizer {
  PeriodicField field;           ///< normalized to ||u||_{2#} = 1, maximum at s = 0
  double lambda_min = 0.0;
  double initial_quotient = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  double k0_inv_sq = 0.0;
  bool below_k0_threshold = false;  ///< lambda_min < K0^{-2}
};

class StagnationError : public NumericalError {
public:
  StagnationError(const std::string& what, Minimizer last)
      : NumericalError(what), last_(std::move(last)) {}
  const Minimizer& last_iterate() const noexcept { return last_; }

private:
  Minimizer last_;
};

/// Preconditioned projected gradient descent for lambda(u) on ||u||_{2#} = 1, the
/// preconditioner being P^{-1}. Armijo backtracking makes lambda monotone.
Minimizer minimize_quotient(const PeriodicField& init, const OperatorParams& params,
                            const MinimizerOptions& opts = {});

/// w = lambda^{(n-4)/8} u turns P u = lambda u^{2#-1} into P w = w^{2#-1}; w is then
/// polished by newton_solve.
Solution rescale_to_solution(const PeriodicField& minimizer, double lambda_min,
                             const OperatorParams& params, const SolverOptions& opts = {});

struct LinearizedMode {
  double eigenvalue = 0.0;
  int mode = 0;  ///< |m| carrying the largest eigenvector component
};

enum class SpectrumMethod { automatic, closed_form, dense };

/// Eigenvalues of P - (2#-1) u^{2#-2} on circle modes |m| <= kmax, ascending. The closed
/// form (constant solutions only) is mu_m^2 + alpha mu_m + a - (2#-1) a, once for m = 0
/// and twice for m > 0.
std::vector<LinearizedMode> linearized_spectrum(const Solution& sol, int kmax,
                                                SpectrumMethod method = SpectrumMethod::automatic);

/// Smallest eigenvalue whose mode label is nonzero; NaN when there is none.
double smallest_nonzero_mode_eigenvalue(const std::vector<LinearizedMode>& spectrum);

/// mu^2 + alpha mu + a - (2#-1) a with mu = (m/t)^2.
double constant_mode_eigenvalue(const ManifoldSpec& spec, const OperatorParams& params, int m);

/// Positive root in alpha of mu^2 + alpha mu - (2#-2) alpha^2/4 = 0, mu = (m/t)^2: the value
/// past which mode m destabilizes the constant branch of a = alpha^2/4.
double bifurcation_alpha(int n, double t, int m);

/// First-order predictor for the solution at `next`: sol + d(alpha) * du/dalpha, where
/// J du/dalpha = -dF/dalpha along the straight path from sol.params to next (phase fixed).
PeriodicField tangent_predictor(const Solution& sol, const OperatorParams& next);

/// The translate of u with its maximum at s = 0.
PeriodicField center_at_max(const PeriodicField& u);

/// Build a Solution record (energies, quotient, flags) for a field without iterating.
Solution make_solution(const PeriodicField& u, const OperatorParams& params, int iterations,
                       double constant_tolerance = 1e-8);

}  // namespace paneitz
