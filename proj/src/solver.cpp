#include "paneitz/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace paneitz {

void SolverOptions::validate() const {
  if (modes < 16 || modes % 2 != 0) throw DomainError("solver mode count must be even and >= 16");
  if (adapt_modes && (max_modes < modes || max_modes % 2 != 0)) {
    throw DomainError("max_modes must be even and >= modes");
  }
  if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
  if (max_iterations < 0 || max_halvings < 0) throw DomainError("iteration limits must be >= 0");
  if (positivity_penalty < 0.0) throw DomainError("positivity penalty must be >= 0");
}

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Coefficients indexed by m + K for m = -K..K.
struct Spectral {
  ManifoldSpec spec;
  int k;  // max mode
  int grid;
  double power;  // 2# - 1
  std::vector<double> symbol;

  Spectral(const ManifoldSpec& s, int max_mode, const OperatorParams& params)
      : spec(s), k(max_mode), grid(4 * max_mode), power(critical_exponent(s.dimension()) - 1.0) {
    symbol.resize(static_cast<std::size_t>(2 * k + 1));
    for (int m = -k; m <= k; ++m) {
      const double mu = (m / spec.radius()) * (m / spec.radius());
      symbol[idx(m)] = params.symbol(mu);
    }
  }
  std::size_t idx(int m) const { return static_cast<std::size_t>(m + k); }
  int size() const { return 2 * k + 1; }

  VectorXcd unpack(const PeriodicField& u) const {
    VectorXcd c(size());
    for (int m = -k; m <= k; ++m) c(static_cast<Eigen::Index>(idx(m))) = u.coefficient(m);
    return c;
  }
  std::vector<Complex> pack(const VectorXcd& c) const {
    std::vector<Complex> out(static_cast<std::size_t>(k) + 1);
    out[0] = Complex(c(k).real(), 0.0);
    for (int m = 1; m <= k; ++m) {
      // average with the mirrored entry to keep the field exactly real
      out[static_cast<std::size_t>(m)] =
          0.5 * (c(static_cast<Eigen::Index>(idx(m))) + std::conj(c(static_cast<Eigen::Index>(idx(-m)))));
    }
    return out;
  }
  std::vector<double> values(const VectorXcd& c) const { return inverse(pack(c), grid); }
};

struct Evaluation {
  VectorXcd residual;   // coefficient vector of F
  double relative_sup;  // sup_grid |F| / max(1, sup u_+^{p})
  double min_value;
};

Evaluation evaluate(const Spectral& sp, const VectorXcd& c, double penalty) {
  const auto u = sp.values(c);
  std::vector<double> nonlinear(u.size());
  double scale = 1.0;
  double umin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double plus = std::max(u[j], 0.0);
    const double pw = std::pow(plus, sp.power);
    scale = std::max(scale, pw);
    nonlinear[j] = pw - penalty * std::min(u[j], 0.0);
    umin = std::min(umin, u[j]);
  }
  const auto nhat = transform(nonlinear, sp.k);
  VectorXcd f(sp.size());
  for (int m = -sp.k; m <= sp.k; ++m) {
    const Complex nm = m >= 0 ? nhat[static_cast<std::size_t>(m)] : std::conj(nhat[static_cast<std::size_t>(-m)]);
    const auto i = static_cast<Eigen::Index>(sp.idx(m));
    f(i) = sp.symbol[sp.idx(m)] * c(i) - nm;
  }
  const auto fvals = sp.values(f);
  double sup = 0.0;
  for (const double v : fvals) sup = std::max(sup, std::abs(v));
  return {f, sup / scale, umin};
}

// J = diag(symbol) - Toeplitz(w_hat), w = (2#-1) u_+^{2#-2} - penalty * 1{u < 0}.
MatrixXcd jacobian(const Spectral& sp, const VectorXcd& c, double penalty) {
  const auto u = sp.values(c);
  std::vector<double> w(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double plus = std::max(u[j], 0.0);
    w[j] = sp.power * std::pow(plus, sp.power - 1.0) - (u[j] < 0.0 ? penalty : 0.0);
  }
  const auto what = full_spectrum(w);
  const int g = static_cast<int>(what.size());
  const int n = sp.size();
  MatrixXcd j(n, n);
  for (int r = 0; r < n; ++r) {
    for (int q = 0; q < n; ++q) {
      const int diff = ((r - q) % g + g) % g;
      j(r, q) = -what[static_cast<std::size_t>(diff)];
    }
    j(r, r) += sp.symbol[static_cast<std::size_t>(r)];
  }
  return j;
}

// Generator of translations, d/ds u, in coefficient space.
VectorXcd translation_generator(const Spectral& sp, const VectorXcd& c) {
  VectorXcd g(sp.size());
  for (int m = -sp.k; m <= sp.k; ++m) {
    const auto i = static_cast<Eigen::Index>(sp.idx(m));
    g(i) = Complex(0.0, m / sp.spec.radius()) * c(i);
  }
  return g;
}

VectorXcd newton_step(const Spectral& sp, const VectorXcd& c, const VectorXcd& f, double penalty) {
  const MatrixXcd j = jacobian(sp, c, penalty);
  const VectorXcd gen = translation_generator(sp, c);
  const int n = sp.size();
  if (gen.norm() <= 1e-8 * c.norm()) {
    return j.partialPivLu().solve(-f);
  }
  // Bordered system: the step stays orthogonal to the translation orbit.
  MatrixXcd b = MatrixXcd::Zero(n + 1, n + 1);
  b.topLeftCorner(n, n) = j;
  b.topRightCorner(n, 1) = gen;
  b.bottomLeftCorner(1, n) = gen.adjoint();
  VectorXcd rhs = VectorXcd::Zero(n + 1);
  rhs.head(n) = -f;
  const VectorXcd x = b.partialPivLu().solve(rhs);
  return x.head(n);
}

struct NewtonOutcome {
  VectorXcd coeffs;
  int iterations;
};

NewtonOutcome run_newton(const Spectral& sp, VectorXcd c, const SolverOptions& opts) {
  int iterations = 0;
  Evaluation ev = evaluate(sp, c, opts.positivity_penalty);
  while (ev.relative_sup > opts.tolerance) {
    if (iterations >= opts.max_iterations) {
      std::ostringstream msg;
      msg << "Newton iteration did not converge in " << opts.max_iterations
          << " iterations (residual " << ev.relative_sup << ")";
      throw ConvergenceError(msg.str(), ev.relative_sup);
    }
    const VectorXcd step = newton_step(sp, c, ev.residual, opts.positivity_penalty);
    const double norm0 = ev.residual.norm();
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      const VectorXcd trial = c + lambda * step;
      Evaluation tev = evaluate(sp, trial, opts.positivity_penalty);
      if (std::isfinite(tev.relative_sup) && tev.residual.norm() < (1.0 - 1e-4 * lambda) * norm0) {
        c = trial;
        ev = std::move(tev);
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++iterations;
    if (!accepted) {
      throw ConvergenceError("Newton line search failed (residual " +
                                 std::to_string(ev.relative_sup) + ")",
                             ev.relative_sup);
    }
  }
  const Evaluation plain = evaluate(sp, c, 0.0);
  if (!(plain.min_value > 0.0)) {
    throw PositivityError("Newton converged to a field with min u = " +
                              std::to_string(plain.min_value) + " <= 0",
                          plain.min_value);
  }
  if (plain.relative_sup > opts.tolerance) {
    throw ConvergenceError("penalty-free verification failed (residual " +
                               std::to_string(plain.relative_sup) + ")",
                           plain.relative_sup);
  }
  return {c, iterations};
}

}  // namespace

PeriodicField residual(const PeriodicField& u, const OperatorParams& params) {
  const Spectral sp(u.spec(), u.max_mode(), params);
  const auto ev = evaluate(sp, sp.unpack(u), 0.0);
  return PeriodicField::from_coefficients(u.spec(), sp.pack(ev.residual));
}

double residual_sup(const PeriodicField& u, const OperatorParams& params) {
  const Spectral sp(u.spec(), u.max_mode(), params);
  return evaluate(sp, sp.unpack(u), 0.0).relative_sup;
}

double quotient(const PeriodicField& u, const OperatorParams& params) {
  const double e = energy(u);
  if (!(e > 0.0)) throw DomainError("the Sobolev quotient is undefined for u = 0");
  return pairing(u, params) / std::pow(e, 2.0 / critical_exponent(u.spec().dimension()));
}

Solution make_solution(const PeriodicField& u, const OperatorParams& params, int iterations,
                       double constant_tolerance) {
  Solution s{u, params};
  s.residual_sup = residual_sup(u, params);
  s.energy = energy(u);
  s.pairing = pairing(u, params);
  s.energy_identity_residual = std::abs(s.pairing - s.energy) / s.energy;
  s.lambda_quotient = quotient(u, params);
  s.is_constant = u.relative_variance() < constant_tolerance;
  s.newton_iterations = iterations;
  s.modes = u.modes();
  return s;
}

Solution newton_solve(const PeriodicField& init, const OperatorParams& params,
                      const SolverOptions& opts) {
  opts.validate();
  if (!(init.max_value() > 0.0)) {
    throw DomainError("Newton init must be positive somewhere");
  }
  // With adaptation on, an init that is already finer than opts.modes keeps its resolution.
  int modes = opts.adapt_modes ? std::clamp(init.modes(), opts.modes, opts.max_modes) : opts.modes;
  PeriodicField current = init.modes() == modes ? init : init.resampled(modes);
  int total_iterations = 0;
  while (true) {
    const Spectral sp(current.spec(), current.max_mode(), params);
    const auto out = run_newton(sp, sp.unpack(current), opts);
    total_iterations += out.iterations;
    current = out.iterations == 0 ? current
                                  : PeriodicField::from_coefficients(current.spec(), sp.pack(out.coeffs));
    if (!opts.adapt_modes || current.tail_fraction() <= opts.tail_tolerance ||
        modes >= opts.max_modes) {
      break;
    }
    modes = std::min(2 * modes, opts.max_modes);
    current = current.resampled(modes);
  }
  return make_solution(current, params, total_iterations, opts.constant_tolerance);
}

// ---------------------------------------------------------------------------
// Quotient minimization

namespace {

double lp_norm(const PeriodicField& u) {
  return std::pow(energy(u), 1.0 / critical_exponent(u.spec().dimension()));
}

PeriodicField normalized(const PeriodicField& u) {
  const double norm = lp_norm(u);
  if (!(norm > 0.0)) throw DomainError("cannot normalize the zero field");
  return u.scaled(1.0 / norm);
}

}  // namespace

Minimizer minimize_quotient(const PeriodicField& init, const OperatorParams& params,
                            const MinimizerOptions& opts) {
  const ManifoldSpec& spec = init.spec();
  const int n = spec.dimension();
  const double p = critical_exponent(n);
  const Spectral sp(spec, init.max_mode(), params);
  const double k0_inv_sq = sharp_constant(n).k0_inv_sq;

  PeriodicField u = normalized(init);
  double q = pairing(u, params);
  Minimizer state{u, q, q, std::numeric_limits<double>::infinity(), 0, k0_inv_sq, q < k0_inv_sq};
  double step = opts.initial_step;

  const auto p_norm = [&](const VectorXcd& x) {
    double s = 0.0;
    for (int i = 0; i < sp.size(); ++i) s += sp.symbol[static_cast<std::size_t>(i)] * std::norm(x(i));
    return std::sqrt(s);
  };

  for (int it = 0; it < opts.max_iterations; ++it) {
    const VectorXcd c = sp.unpack(u);
    // |u|^{2#-2} u projected on the modes
    std::vector<double> g(u.values().begin(), u.values().end());
    for (auto& v : g) v = std::pow(std::abs(v), p - 2.0) * v;
    const auto ghat = transform(g, sp.k);
    VectorXcd grad(sp.size());
    for (int m = -sp.k; m <= sp.k; ++m) {
      const Complex gm = m >= 0 ? ghat[static_cast<std::size_t>(m)] : std::conj(ghat[static_cast<std::size_t>(-m)]);
      const auto i = static_cast<Eigen::Index>(sp.idx(m));
      grad(i) = c(i) - q * gm / sp.symbol[sp.idx(m)];
    }
    const double gnorm = p_norm(grad) / p_norm(c);
    state.gradient_norm = gnorm;
    state.iterations = it;
    if (gnorm <= opts.gradient_tolerance) break;

    bool accepted = false;
    while (step > 1e-14) {
      const VectorXcd trial_c = c - step * grad;
      PeriodicField trial = normalized(PeriodicField::from_coefficients(spec, sp.pack(trial_c)));
      const double tq = pairing(trial, params);
      if (tq <= q - 1e-4 * step * gnorm * gnorm * q) {
        u = std::move(trial);
        q = tq;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    state.field = u;
    state.lambda_min = q;
    if (!accepted) {
      state.field = center_at_max(u);
      throw StagnationError("quotient descent stagnated (gradient " + std::to_string(gnorm) + ")",
                            state);
    }
    step = std::min(1.5 * step, 1.0);
    if (it + 1 == opts.max_iterations) {
      state.iterations = it + 1;
      state.field = center_at_max(u);
      throw StagnationError("quotient descent hit the iteration limit (gradient " +
                                std::to_string(gnorm) + ")",
                            state);
    }
  }
  state.field = center_at_max(u);
  state.lambda_min = q;
  state.below_k0_threshold = q < k0_inv_sq;
  return state;
}

Solution rescale_to_solution(const PeriodicField& minimizer, double lambda_min,
                             const OperatorParams& params, const SolverOptions& opts) {
  if (!(lambda_min > 0.0)) throw DomainError("lambda_min must be positive");
  const double n = minimizer.spec().dimension();
  const PeriodicField w = minimizer.scaled(std::pow(lambda_min, (n - 4.0) / 8.0));
  return newton_solve(w, params, opts);
}

// ---------------------------------------------------------------------------
// Linear stability

double constant_mode_eigenvalue(const ManifoldSpec& spec, const OperatorParams& params, int m) {
  const double mu = circle_eigenvalue(spec, m);
  const double p = critical_exponent(spec.dimension());
  return params.symbol(mu) - (p - 1.0) * params.a();
}

std::vector<LinearizedMode> linearized_spectrum(const Solution& sol, int kmax, SpectrumMethod method) {
  if (kmax < 0) throw DomainError("kmax must be nonnegative");
  if (method == SpectrumMethod::automatic) {
    method = sol.is_constant ? SpectrumMethod::closed_form : SpectrumMethod::dense;
  }
  std::vector<LinearizedMode> out;
  if (method == SpectrumMethod::closed_form) {
    if (!sol.is_constant) throw DomainError("closed-form spectrum needs a constant solution");
    for (int m = 0; m <= kmax; ++m) {
      const double e = constant_mode_eigenvalue(sol.field.spec(), sol.params, m);
      for (int r = 0; r < circle_multiplicity(m); ++r) out.push_back({e, m});
    }
  } else {
    const Spectral sp(sol.field.spec(), sol.field.max_mode(), sol.params);
    const MatrixXcd j = jacobian(sp, sp.unpack(sol.field), 0.0);
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(j);
    if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    for (int i = 0; i < sp.size(); ++i) {
      Eigen::Index row = 0;
      eig.eigenvectors().col(i).cwiseAbs().maxCoeff(&row);
      const int mode = std::abs(static_cast<int>(row) - sp.k);
      if (mode <= kmax) out.push_back({eig.eigenvalues()(i), mode});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.eigenvalue < y.eigenvalue || (x.eigenvalue == y.eigenvalue && x.mode < y.mode);
  });
  return out;
}

double smallest_nonzero_mode_eigenvalue(const std::vector<LinearizedMode>& spectrum) {
  for (const auto& e : spectrum) {
    if (e.mode != 0) return e.eigenvalue;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double bifurcation_alpha(int n, double t, int m) {
  if (m < 1) throw DomainError("bifurcation mode must be >= 1");
  const ManifoldSpec spec(n, t);
  const double mu = circle_eigenvalue(spec, m);
  const double p = critical_exponent(n);
  return 2.0 * mu * (1.0 + std::sqrt(p - 1.0)) / (p - 2.0);
}

PeriodicField tangent_predictor(const Solution& sol, const OperatorParams& next) {
  const double dalpha = next.alpha() - sol.params.alpha();
  if (dalpha == 0.0) return sol.field;
  const double dadalpha = (next.a() - sol.params.a()) / dalpha;
  const Spectral sp(sol.field.spec(), sol.field.max_mode(), sol.params);
  const VectorXcd c = sp.unpack(sol.field);
  VectorXcd dfda(sp.size());
  for (int m = -sp.k; m <= sp.k; ++m) {
    const double mu = (m / sp.spec.radius()) * (m / sp.spec.radius());
    const auto i = static_cast<Eigen::Index>(sp.idx(m));
    dfda(i) = (mu + dadalpha) * c(i);
  }
  const VectorXcd tangent = newton_step(sp, c, dfda, 0.0);
  const VectorXcd predicted = c + dalpha * tangent;
  return PeriodicField::from_coefficients(sol.field.spec(), sp.pack(predicted));
}

PeriodicField center_at_max(const PeriodicField& u) {
  if (u.relative_variance() == 0.0) return u;
  return u.shifted(u.argmax());
}

}  // namespace paneitz
