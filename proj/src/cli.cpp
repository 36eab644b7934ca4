#include "paneitz/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "paneitz/bubble.hpp"
#include "paneitz/constants.hpp"
#include "paneitz/diagnostics.hpp"
#include "paneitz/field.hpp"
#include "paneitz/solver.hpp"
#include "paneitz/sweep.hpp"

namespace paneitz::cli {

namespace {

using Json = nlohmann::ordered_json;

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double parse_double(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw UsageError("--" + flag + ": malformed number '" + text + "'");
  }
  return v;
}

std::string valid_flags(const CLI::App& app) {
  std::string list;
  for (const CLI::Option* opt : app.get_options()) {
    for (const auto& name : opt->get_lnames()) list += (list.empty() ? "--" : ", --") + name;
    if (opt->get_lnames().empty() && !opt->get_name().empty()) {
      list += (list.empty() ? "" : ", ") + opt->get_name();
    }
  }
  return list;
}

// Rejects a > alpha^2/4 with the constraint spelled out.
void check_a1(double alpha, double a) {
  if (alpha > 0.0 && a > 0.25 * alpha * alpha) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "a = " << a << " violates a <= alpha^2/4 = " << 0.25 * alpha * alpha;
    throw FactorizationError(msg.str());
  }
}

}  // namespace

CliConfig parse(const std::vector<std::string>& args) {
  CliConfig cfg;
  CLI::App app{"Spectral solver for fourth-order critical equations on S^1(t) x S^{n-1}",
               "paneitz"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string a_text = "auto";
  std::vector<std::string> alpha_spec;
  std::string alpha_text;

  auto* constants = app.add_subcommand("constants", "Critical exponent, K0 and c_n as JSON");
  constants->add_option("--dim", cfg.n, "Dimension n >= 5")->required();

  auto* bubble = app.add_subcommand("bubble-check", "Residual, energy and Pohozaev check of the bubble");
  bubble->add_option("--dim", cfg.n, "Dimension n >= 5")->required();
  bubble->add_option("--lambda0", cfg.lambda0, "Bubble concentration scale")->capture_default_str();
  bubble->add_option("--lambda-inf", cfg.lambda_inf, "Coefficient of the nonlinearity")
      ->capture_default_str();
  bubble->add_option("--rmax", cfg.rmax, "Outer radius of the residual grid")->capture_default_str();
  bubble->add_option("--grid", cfg.gridsize, "Residual grid intervals")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve the circle-reduced equation; Solution as JSON");
  solve->add_option("--dim", cfg.n, "Dimension n >= 5")->capture_default_str();
  solve->add_option("--t", cfg.t, "Circle radius")->capture_default_str();
  solve->add_option("--alpha", alpha_text, "Operator coefficient alpha > 0")->required();
  solve->add_option("--a", a_text, "Zeroth-order coefficient, or auto = alpha^2/4")
      ->capture_default_str();
  solve->add_option("--modes", cfg.modes, "Fourier mode count N")->capture_default_str();
  solve->add_option("--max-modes", cfg.max_modes, "Upper bound for --adapt")->capture_default_str();
  solve->add_flag("--adapt", cfg.adapt, "Double N until the spectral tail is resolved");
  solve->add_option("--tol", cfg.tolerance, "Newton tolerance on the relative residual")
      ->capture_default_str();
  solve->add_option("--init", cfg.init, "constant, mode1 or a field file")->capture_default_str();
  solve->add_option("--field-out", cfg.field_out, "Write the solution field to this file");

  auto* sweep = app.add_subcommand("sweep", "Energy-function sweep over alpha; CSV or JSON file");
  sweep->add_option("--dim", cfg.n, "Dimension n >= 5")->capture_default_str();
  sweep->add_option("--t", cfg.t, "Circle radius")->capture_default_str();
  sweep->add_option("--alpha", alpha_spec, "min max count [log]")->required()->expected(3, 4);
  sweep->add_option("--schedule", cfg.schedule, "auto (a = alpha^2/4) or a file of 'alpha a' lines")
      ->capture_default_str();
  sweep->add_option("--delta", cfg.delta, "Ball radius of the concentration ratios (default L/8)");
  sweep->add_option("--modes", cfg.modes, "Initial Fourier mode count")->capture_default_str();
  sweep->add_option("--max-modes", cfg.max_modes, "Largest Fourier mode count")->capture_default_str();
  sweep->add_option("--out", cfg.out, "Output path")->required();
  sweep->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* diagnose = app.add_subcommand("diagnose", "Concentration diagnostics of a field file as JSON");
  diagnose->add_option("field", cfg.field_in, "Field file")->required();
  diagnose->add_option("--alpha", alpha_text, "Operator coefficient alpha > 0")->required();
  diagnose->add_option("--a", a_text, "Zeroth-order coefficient, or auto = alpha^2/4")
      ->capture_default_str();
  diagnose->add_option("--delta", cfg.delta, "Ball radius (default L/8)");
  diagnose->add_option("--theta", cfg.theta, "Mass fraction of a concentration point")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream text;
    app.exit(e, text, text);
    cfg.subcommand = "help";
    cfg.help_text = text.str();
    return cfg;
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream text;
    app.exit(e, text, text);
    cfg.subcommand = "help";
    cfg.help_text = text.str();
    return cfg;
  } catch (const CLI::ExtrasError& e) {
    const auto subs = app.get_subcommands();
    const CLI::App& scope = subs.empty() ? app : *subs.front();
    throw UsageError(std::string(e.what()) + "; valid options: " + valid_flags(scope));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  for (const CLI::Option* opt : chosen->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    std::string value;
    for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    cfg.options[key] = value;
  }

  // Semantic validation with module errors.
  const ManifoldSpec spec(cfg.n, cfg.t);
  if (cfg.subcommand == "solve" || cfg.subcommand == "diagnose") {
    cfg.alpha = parse_double(alpha_text, "alpha");
    if (!(cfg.alpha > 0.0)) throw DomainError("alpha must be positive");
    cfg.a_auto = a_text == "auto";
    cfg.a = cfg.a_auto ? 0.25 * cfg.alpha * cfg.alpha : parse_double(a_text, "a");
    check_a1(cfg.alpha, cfg.a);
    OperatorParams(cfg.alpha, cfg.a);
  }
  if (cfg.subcommand == "solve") {
    SolverOptions o;
    o.modes = cfg.modes;
    o.max_modes = cfg.max_modes;
    o.adapt_modes = cfg.adapt;
    o.tolerance = cfg.tolerance;
    o.validate();
  }
  if (cfg.subcommand == "sweep") {
    cfg.alpha_min = parse_double(alpha_spec[0], "alpha");
    cfg.alpha_max = parse_double(alpha_spec[1], "alpha");
    const double count = parse_double(alpha_spec[2], "alpha");
    if (count != std::floor(count) || count < 1) throw UsageError("--alpha: count must be a positive integer");
    cfg.alpha_count = static_cast<int>(count);
    if (alpha_spec.size() == 4) {
      if (alpha_spec[3] == "log") {
        cfg.alpha_log = true;
      } else if (alpha_spec[3] != "lin") {
        throw UsageError("--alpha: fourth value must be 'log' or 'lin', got '" + alpha_spec[3] + "'");
      }
    }
    const auto grid = alpha_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_count, cfg.alpha_log);
    const Schedule schedule = cfg.schedule == "auto" ? model_schedule() : load_schedule(cfg.schedule);
    for (const double alpha : grid) check_a1(alpha, schedule(alpha));
    if (cfg.delta && !(*cfg.delta > 0.0 && *cfg.delta < 0.5 * spec.period())) {
      throw DomainError("--delta must satisfy 0 < delta < L/2");
    }
    SolverOptions o = SweepConfig::default_solver();
    o.modes = cfg.modes;
    o.max_modes = cfg.max_modes;
    o.validate();
  }
  if (cfg.subcommand == "diagnose" && !(cfg.theta > 0.0 && cfg.theta < 1.0)) {
    throw DomainError("--theta must lie in (0, 1)");
  }
  return cfg;
}

namespace {

Json solution_json(const Solution& s) {
  const auto& spec = s.field.spec();
  Json j;
  j["n"] = spec.dimension();
  j["t"] = spec.radius();
  j["alpha"] = s.params.alpha();
  j["a"] = s.params.a();
  j["c"] = s.params.c();
  j["d"] = s.params.d();
  j["modes"] = s.modes;
  j["newton_iterations"] = s.newton_iterations;
  j["residual_sup"] = num(s.residual_sup);
  j["energy"] = num(s.energy);
  j["pairing"] = num(s.pairing);
  j["energy_identity_residual"] = num(s.energy_identity_residual);
  j["lambda_quotient"] = num(s.lambda_quotient);
  j["is_constant"] = s.is_constant;
  j["min_value"] = s.field.min_value();
  j["max_value"] = s.field.max_value();
  j["E_const"] = constant_branch(spec.dimension(), s.params.a(), product_volume(spec)).energy;
  return j;
}

int run_constants(const CliConfig& c, std::ostream& out) {
  const auto k = sharp_constant(c.n);
  Json j;
  j["n"] = c.n;
  j["two_sharp"] = critical_exponent(c.n);
  j["K0"] = k.k0;
  j["K0_inv_sq"] = k.k0_inv_sq;
  j["c_n"] = bubble_coefficient(c.n);
  out << j.dump(2) << '\n';
  return 0;
}

int run_bubble_check(const CliConfig& c, std::ostream& out) {
  BubbleParams p{c.n, c.lambda0, c.lambda_inf};
  p.validate();
  const auto res = pde_residual(p, c.rmax, c.gridsize);
  const auto en = bubble_energy(p);
  const auto field = RadialField::bubble(p);
  const auto poh = pohozaev_identity_residual(field, c.n, c.rmax);
  Json j;
  j["n"] = c.n;
  j["lambda0"] = c.lambda0;
  j["lambda_inf"] = c.lambda_inf;
  j["rmax"] = c.rmax;
  j["residual_sup"] = res.sup;
  j["residual_at_radius"] = res.at_radius;
  j["energy"] = en.value;
  j["expected_energy"] = en.expected;
  j["energy_relative_error"] = en.relative_error;
  j["energy_converged"] = en.converged;
  j["pohozaev_residual"] = poh.residual;
  j["pohozaev_decay_warning"] = poh.decay_warning;
  out << j.dump(2) << '\n';
  return 0;
}

int run_solve(const CliConfig& c, std::ostream& out) {
  const ManifoldSpec spec(c.n, c.t);
  const OperatorParams params(c.alpha, c.a);
  SolverOptions opts;
  opts.modes = c.modes;
  opts.max_modes = c.max_modes;
  opts.adapt_modes = c.adapt;
  opts.tolerance = c.tolerance;
  const double u_bar = constant_branch(c.n, params.a(), 1.0).u_bar;

  Solution sol = [&] {
    if (c.init == "constant") {
      return newton_solve(PeriodicField::constant(spec, c.modes, u_bar), params, opts);
    }
    if (c.init == "mode1") {
      // Newton alone falls back onto the constant from this seed; descend the quotient first.
      // With --adapt an underresolved descent is repeated on twice the modes.
      for (int modes = c.modes;; modes *= 2) {
        const auto seed = PeriodicField::from_function(
            spec, modes, [&](double s) { return u_bar * (1.0 + 0.1 * std::cos(s / c.t)); });
        Minimizer m{seed, 0.0};
        try {
          m = minimize_quotient(seed, params);
        } catch (const StagnationError& e) {
          m = e.last_iterate();
        }
        try {
          return rescale_to_solution(m.field, m.lambda_min, params, opts);
        } catch (const NumericalError&) {
          if (!c.adapt || 2 * modes > c.max_modes) throw;
        }
      }
    }
    const PeriodicField init = load_field(c.init);
    if (!(init.spec() == spec)) {
      throw InputError("field file '" + c.init + "' was written for a different (n, t)");
    }
    return newton_solve(init, params, opts);
  }();
  sol.field = center_at_max(sol.field);
  if (c.field_out) save_field(*c.field_out, sol.field);
  Json j = solution_json(sol);
  j["init"] = c.init;
  out << j.dump(2) << '\n';
  return 0;
}

int run_sweep_command(const CliConfig& c, std::ostream& out) {
  SweepConfig cfg;
  cfg.spec = ManifoldSpec(c.n, c.t);
  cfg.alphas = alpha_grid(c.alpha_min, c.alpha_max, c.alpha_count, c.alpha_log);
  cfg.schedule = c.schedule == "auto" ? model_schedule() : load_schedule(c.schedule);
  cfg.delta = c.delta;
  cfg.solver.modes = c.modes;
  cfg.solver.max_modes = c.max_modes;
  const auto records = run_sweep(cfg);
  emit(records, c.out, c.format == "json" ? OutputFormat::json : OutputFormat::csv);
  Json j;
  j["out"] = c.out;
  j["format"] = c.format;
  j["rows"] = records.size();
  out << j.dump(2) << '\n';
  return 0;
}

int run_diagnose(const CliConfig& c, std::ostream& out) {
  const PeriodicField u = load_field(*c.field_in);
  const OperatorParams params(c.alpha, c.a);
  const double delta = c.delta.value_or(u.spec().period() / 8.0);
  const auto r = concentration_ratios(u, params, delta);
  const auto points = concentration_points(u, delta, c.theta);
  Json j;
  j["n"] = u.spec().dimension();
  j["t"] = u.spec().radius();
  j["alpha"] = params.alpha();
  j["a"] = params.a();
  j["center"] = r.center;
  j["delta"] = r.delta;
  j["R_L2"] = r.r_l2;
  j["R_gradL2"] = num(r.r_grad_l2);
  j["R_gradL2_defined"] = r.r_grad_l2_defined;
  j["R_gradL2_weak"] = num(r.r_grad_l2_weak);
  j["R_strong"] = num(r.r_strong);
  j["R_strong_supported"] = r.r_strong_supported;
  j["hessian_ratio"] = r.hessian_ratio;
  j["hessian_ratio_over_a"] = r.hessian_ratio_over_a;
  Json pts = Json::array();
  for (const auto& p : points) pts.push_back({{"position", p.position}, {"mass_fraction", p.mass_fraction}});
  j["concentration_points"] = pts;
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int dispatch(const CliConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.subcommand == "help") {
      out << c.help_text;
      return 0;
    }
    if (c.subcommand == "constants") return run_constants(c, out);
    if (c.subcommand == "bubble-check") return run_bubble_check(c, out);
    if (c.subcommand == "solve") return run_solve(c, out);
    if (c.subcommand == "sweep") return run_sweep_command(c, out);
    if (c.subcommand == "diagnose") return run_diagnose(c, out);
    err << "error: unknown subcommand '" << c.subcommand << "'\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = parse(args);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return dispatch(cfg, out, err);
}

}  // namespace paneitz::cli
