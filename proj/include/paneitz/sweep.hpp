#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paneitz/constants.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/solver.hpp"

namespace paneitz {

/// count values from min to max, log- or linearly spaced. The endpoints are exact.
std::vector<double> alpha_grid(double min, double max, int count, bool log_spaced = true);

using Schedule = std::function<double(double)>;

/// a = alpha^2 / 4.
Schedule model_schedule();

/// Plain-text lines "alpha value" ('#' starts a comment). The returned schedule answers only
/// the alphas listed, compared exactly, and throws InputError for any other alpha.
Schedule load_schedule(const std::filesystem::path& path);
Schedule read_schedule(std::istream& in, const std::string& source = "schedule");

struct SweepConfig {
  ManifoldSpec spec{5, 1.0};
  std::vector<double> alphas;
  Schedule schedule = model_schedule();
  std::optional<double> delta;  ///< default L/8
  SolverOptions solver = default_solver();
  MinimizerOptions minimizer{};

  double delta_or_default() const { return delta.value_or(spec.period() / 8.0); }
  static SolverOptions default_solver();
};

struct SweepRecord {
  double alpha = 0.0;
  double a_alpha = 0.0;
  double c_alpha = 0.0;
  double d_alpha = 0.0;
  double E_const = 0.0;
  std::optional<double> E_nonconst;
  double E_m_estimate = 0.0;  ///< upper bound over the branches searched
  double lambda_quotient = 0.0;
  bool lambda_vs_K0inv2 = false;  ///< lambda_quotient < K0^{-2}
  bool is_nonconstant = false;    ///< the estimate comes from the nonconstant branch
  double R_L2 = 0.0;
  double R_gradL2 = 0.0;  ///< NaN for a gradient-free solution
  double hessian_ratio_over_a = 0.0;
  int modes_used = 0;
  int newton_iters = 0;
  double residual_sup = 0.0;
  std::string note;  ///< why the nonconstant branch is absent; not part of the emitted schema
};

/// Column order of the CSV header and the JSON keys.
const std::vector<std::string>& sweep_columns();

/// One record per alpha, ascending. Throws FactorizationError before any solve if the
/// schedule violates a <= alpha^2/4 somewhere on the grid; solver failures at a single alpha
/// only mark that row's nonconstant branch absent.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Newton from prev towards next with a tangent predictor. On failure the alpha step is
/// halved, at most max_halvings times. A result on the constant branch counts as a failure
/// unless prev was constant. Throws ConvergenceError("branch lost ...") when all fail.
Solution branch_continuation(const Solution& prev, const OperatorParams& next,
                             const SolverOptions& opts = SweepConfig::default_solver(),
                             int max_halvings = 4);

enum class OutputFormat { csv, json };

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_json(std::ostream& out, const std::vector<SweepRecord>& records);
/// Throws DomainError for no records and InputError naming the path on I/O failure.
void emit(const std::vector<SweepRecord>& records, const std::filesystem::path& path,
          OutputFormat format);
std::vector<SweepRecord> read_csv(std::istream& in);

}  // namespace paneitz
