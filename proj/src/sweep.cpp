#include "paneitz/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "paneitz/diagnostics.hpp"
#include "paneitz/errors.hpp"

namespace paneitz {

std::vector<double> alpha_grid(double min, double max, int count, bool log_spaced) {
  if (count < 1) throw DomainError("alpha grid needs at least one point");
  if (!(min > 0.0) || !std::isfinite(max)) throw DomainError("alpha grid bounds must be positive");
  if (count == 1) {
    if (min != max) throw DomainError("a one-point alpha grid needs min == max");
    return {min};
  }
  if (!(max > min)) throw DomainError("alpha grid needs max > min");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] =
        log_spaced ? min * std::pow(max / min, f) : min + (max - min) * f;
  }
  out.front() = min;
  out.back() = max;
  return out;
}

Schedule model_schedule() {
  return [](double alpha) { return 0.25 * alpha * alpha; };
}

Schedule read_schedule(std::istream& in, const std::string& source) {
  std::map<double, double> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double alpha = 0.0, a = 0.0;
    if (!(row >> alpha)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InputError(source + ":" + std::to_string(lineno) + ": expected 'alpha value'");
    }
    std::string rest;
    if (!(row >> a) || (row >> rest)) {
      throw InputError(source + ":" + std::to_string(lineno) + ": expected 'alpha value'");
    }
    if (!table.emplace(alpha, a).second) {
      throw InputError(source + ":" + std::to_string(lineno) + ": duplicate alpha");
    }
  }
  if (table.empty()) throw InputError(source + ": schedule has no entries");
  return [table, source](double alpha) {
    const auto it = table.find(alpha);
    if (it == table.end()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << source << ": no schedule entry for alpha = " << alpha;
      throw InputError(msg.str());
    }
    return it->second;
  };
}

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("schedule file not found: '" + path.string() + "'");
  return read_schedule(in, path.string());
}

SolverOptions SweepConfig::default_solver() {
  SolverOptions o;
  o.modes = 64;
  o.adapt_modes = true;
  o.max_modes = 512;
  return o;
}

namespace {

// a on the straight path between two parameter sets, interpolating a / (alpha^2/4) so that
// every intermediate point keeps a <= alpha^2/4.
OperatorParams interpolate(const OperatorParams& from, const OperatorParams& to, double alpha) {
  if (alpha == to.alpha()) return to;
  const double r0 = from.a() / (0.25 * from.alpha() * from.alpha());
  const double r1 = to.a() / (0.25 * to.alpha() * to.alpha());
  const double f = (alpha - from.alpha()) / (to.alpha() - from.alpha());
  const double r = std::min(1.0, r0 + f * (r1 - r0));
  return OperatorParams(alpha, r * 0.25 * alpha * alpha);
}

}  // namespace

Solution branch_continuation(const Solution& prev, const OperatorParams& next,
                             const SolverOptions& opts, int max_halvings) {
  const double target = next.alpha();
  double h = target - prev.params.alpha();
  Solution current = prev;
  int halvings = 0;
  while (current.params.alpha() != target) {
    const double remaining = target - current.params.alpha();
    const bool last = std::abs(remaining) <= std::abs(h) * (1.0 + 1e-12);
    const double alpha = last ? target : current.params.alpha() + h;
    try {
      const OperatorParams p = interpolate(prev.params, next, alpha);
      const PeriodicField guess = tangent_predictor(current, p);
      Solution sol = newton_solve(guess, p, opts);
      if (sol.is_constant && !prev.is_constant) {
        throw ConvergenceError("collapsed onto the constant branch", sol.residual_sup);
      }
      current = std::move(sol);
    } catch (const Error& e) {
      if (++halvings > max_halvings) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "branch lost between alpha = " << current.params.alpha() << " and " << alpha
            << ": " << e.what();
        throw ConvergenceError(msg.str(), std::numeric_limits<double>::quiet_NaN());
      }
      h *= 0.5;
    }
  }
  return current;
}

namespace {

std::optional<Solution> seed_branch(const ManifoldSpec& spec, const OperatorParams& params,
                                    const SweepConfig& config, std::string& note) {
  const double u_bar = constant_branch(spec.dimension(), params.a(), 1.0).u_bar;
  const double t = spec.radius();
  const auto init = PeriodicField::from_function(
      spec, config.solver.modes, [&](double s) { return u_bar * (1.0 + 0.1 * std::cos(s / t)); });
  Minimizer m{init, 0.0};
  try {
    m = minimize_quotient(init, params, config.minimizer);
  } catch (const StagnationError& e) {
    m = e.last_iterate();
  }
  Solution sol = rescale_to_solution(m.field, m.lambda_min, params, config.solver);
  if (sol.is_constant) {
    note = "quotient minimization returned the constant";
    return std::nullopt;
  }
  return sol;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.solver.validate();
  const ManifoldSpec& spec = config.spec;
  const int n = spec.dimension();
  const auto report = validate_schedule(config.schedule, config.alphas);
  for (const auto& e : report.entries) {
    if (!e.a1_ok) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "schedule violates a <= alpha^2/4 at alpha = " << e.alpha << " (a = " << e.a << ")";
      throw FactorizationError(msg.str());
    }
  }
  const double delta = config.delta_or_default();
  if (!(delta > 0.0 && delta < 0.5 * spec.period())) {
    throw DomainError("delta must satisfy 0 < delta < L/2");
  }
  const double volume = product_volume(spec);
  const double k0_inv_sq = sharp_constant(n).k0_inv_sq;

  std::vector<SweepRecord> records;
  std::optional<Solution> branch;
  for (const auto& entry : report.entries) {
    const OperatorParams params(entry.alpha, entry.a);
    SweepRecord rec;
    rec.alpha = params.alpha();
    rec.a_alpha = params.a();
    rec.c_alpha = params.c();
    rec.d_alpha = params.d();
    const auto cb = constant_branch(n, params.a(), volume);
    rec.E_const = cb.energy;
    Solution constant = make_solution(PeriodicField::constant(spec, config.solver.modes, cb.u_bar),
                                      params, 0, config.solver.constant_tolerance);

    std::optional<Solution> found;
    if (branch) {
      try {
        found = branch_continuation(*branch, params, config.solver);
      } catch (const Error& e) {
        rec.note = e.what();
      }
    }
    if (!found && constant_mode_eigenvalue(spec, params, 1) < 0.0) {
      try {
        found = seed_branch(spec, params, config, rec.note);
      } catch (const Error& e) {
        rec.note = e.what();
      }
    }
    if (!found && rec.note.empty()) rec.note = "constant branch is linearly stable";
    branch = found;

    const Solution* chosen = &constant;
    if (found) {
      rec.E_nonconst = found->energy;
      if (found->energy < rec.E_const) chosen = &*found;
    }
    rec.is_nonconstant = chosen != &constant;
    rec.E_m_estimate = rec.is_nonconstant ? chosen->energy : rec.E_const;
    rec.lambda_quotient = chosen->lambda_quotient;
    rec.lambda_vs_K0inv2 = rec.lambda_quotient < k0_inv_sq;
    rec.modes_used = chosen->modes;
    rec.newton_iters = chosen->newton_iterations;
    rec.residual_sup = chosen->residual_sup;
    try {
      const auto conc = concentration_ratios(chosen->field, params, delta);
      rec.R_L2 = conc.r_l2;
      rec.R_gradL2 = conc.r_grad_l2;
      rec.hessian_ratio_over_a = conc.hessian_ratio_over_a;
    } catch (const Error& e) {
      rec.R_L2 = rec.R_gradL2 = rec.hessian_ratio_over_a = std::numeric_limits<double>::quiet_NaN();
      rec.note += std::string(rec.note.empty() ? "" : "; ") + e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Output

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns = {
      "alpha",           "a_alpha",          "c_alpha",        "d_alpha",
      "E_const",         "E_nonconst",       "E_m_estimate",   "lambda_quotient",
      "lambda_vs_K0inv2", "is_nonconstant",  "R_L2",           "R_gradL2",
      "hessian_ratio_over_a", "modes_used",  "newton_iters",   "residual_sup"};
  return columns;
}

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& field, const std::string& column) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw InputError("malformed value '" + field + "' in column " + column);
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    out << number(r.alpha) << ',' << number(r.a_alpha) << ',' << number(r.c_alpha) << ','
        << number(r.d_alpha) << ',' << number(r.E_const) << ','
        << (r.E_nonconst ? number(*r.E_nonconst) : "") << ',' << number(r.E_m_estimate) << ','
        << number(r.lambda_quotient) << ',' << (r.lambda_vs_K0inv2 ? 1 : 0) << ','
        << (r.is_nonconstant ? 1 : 0) << ',' << number(r.R_L2) << ',' << number(r.R_gradL2) << ','
        << number(r.hessian_ratio_over_a) << ',' << r.modes_used << ',' << r.newton_iters << ','
        << number(r.residual_sup) << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<SweepRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["alpha"] = r.alpha;
    row["a_alpha"] = r.a_alpha;
    row["c_alpha"] = r.c_alpha;
    row["d_alpha"] = r.d_alpha;
    row["E_const"] = r.E_const;
    row["E_nonconst"] = r.E_nonconst ? num(*r.E_nonconst) : nullptr;
    row["E_m_estimate"] = r.E_m_estimate;
    row["lambda_quotient"] = r.lambda_quotient;
    row["lambda_vs_K0inv2"] = r.lambda_vs_K0inv2;
    row["is_nonconstant"] = r.is_nonconstant;
    row["R_L2"] = num(r.R_L2);
    row["R_gradL2"] = num(r.R_gradL2);
    row["hessian_ratio_over_a"] = num(r.hessian_ratio_over_a);
    row["modes_used"] = r.modes_used;
    row["newton_iters"] = r.newton_iters;
    row["residual_sup"] = num(r.residual_sup);
    arr.push_back(std::move(row));
  }
  out << arr.dump(2) << '\n';
}

void emit(const std::vector<SweepRecord>& records, const std::filesystem::path& path,
          OutputFormat format) {
  if (records.empty()) throw DomainError("no sweep records to emit");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  if (format == OutputFormat::csv) {
    write_csv(out, records);
  } else {
    write_json(out, records);
  }
  out.flush();
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  const auto& cols = sweep_columns();
  std::string line;
  if (!std::getline(in, line)) throw InputError("sweep CSV is empty");
  std::string expected;
  for (std::size_t i = 0; i < cols.size(); ++i) expected += (i ? "," : "") + cols[i];
  if (line != expected) throw InputError("unexpected sweep CSV header '" + line + "'");

  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != cols.size()) {
      throw InputError("sweep CSV row has " + std::to_string(f.size()) + " fields, expected " +
                       std::to_string(cols.size()));
    }
    const auto d = [&](std::size_t i) { return parse_number(f[i], cols[i]); };
    const auto flag = [&](std::size_t i) {
      if (f[i] != "0" && f[i] != "1") throw InputError("malformed flag in column " + cols[i]);
      return f[i] == "1";
    };
    const auto integer = [&](std::size_t i) {
      const double v = d(i);
      if (v != std::floor(v)) throw InputError("malformed integer in column " + cols[i]);
      return static_cast<int>(v);
    };
    SweepRecord r;
    r.alpha = d(0);
    r.a_alpha = d(1);
    r.c_alpha = d(2);
    r.d_alpha = d(3);
    r.E_const = d(4);
    if (!f[5].empty()) r.E_nonconst = d(5);
    r.E_m_estimate = d(6);
    r.lambda_quotient = d(7);
    r.lambda_vs_K0inv2 = flag(8);
    r.is_nonconstant = flag(9);
    r.R_L2 = d(10);
    r.R_gradL2 = d(11);
    r.hessian_ratio_over_a = d(12);
    r.modes_used = integer(13);
    r.newton_iters = integer(14);
    r.residual_sup = d(15);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace paneitz
