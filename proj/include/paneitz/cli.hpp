#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paneitz/errors.hpp"

namespace paneitz::cli {

/// Bad command line: unknown flags, missing values, malformed numbers.
class UsageError : public InputError {
public:
  using InputError::InputError;
};

struct CliConfig {
  std::string subcommand;  ///< constants, bubble-check, solve, sweep, diagnose; "help" for --help
  std::map<std::string, std::string> options;  ///< flag name (without dashes) -> value as given
  std::string help_text;

  int n = 5;
  double t = 1.0;
  double alpha = 0.0;
  double a = 0.0;  ///< resolved; `auto` means alpha^2/4
  bool a_auto = true;
  int modes = 64;
  int max_modes = 512;
  bool adapt = false;
  double tolerance = 1e-11;
  std::string init = "mode1";
  std::optional<std::string> field_out;
  std::optional<std::string> field_in;  ///< diagnose
  std::optional<double> delta;
  double theta = 0.05;
  double lambda0 = 1.0;
  double lambda_inf = 1.0;
  double rmax = 50.0;
  int gridsize = 2000;
  double alpha_min = 0.0, alpha_max = 0.0;
  int alpha_count = 0;
  bool alpha_log = false;
  std::string schedule = "auto";
  std::string out;
  std::string format = "csv";
};

/// Throws UsageError (with the valid flags on unknown ones) and DomainError / FactorizationError
/// for parameters that violate a <= alpha^2/4 or other constraints.
CliConfig parse(const std::vector<std::string>& args);

/// Runs a parsed config. JSON goes to out; exit status 0, 1 on domain or input errors, 2 on
/// numerical failures.
int dispatch(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse + dispatch with error reporting on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paneitz::cli
