#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abel/cases.hpp"
#include "abel/equilibrium.hpp"
#include "abel/hypotheses.hpp"
#include "abel/radau.hpp"
#include "abel/rate.hpp"

namespace abel {

/// %.17g.
std::string fmt17(double v);

void write_trajectory_csv(std::ostream& os, const IntegrationResult& r);
void write_branch_csv(std::ostream& os, const EquilibriumBranch& b);

/// Serialised report as pretty-printed JSON text.
std::string report_json(const HypothesisReport& r);
std::string case_report_json(const CaseRun& run);

/// Equation and solver settings read from a flat `key = value` file.
///
///   # comment
///   degree = 3
///   coefficients = ["3 - 2*exp(-2*x)", "-4", "0", "1"]   # a0 .. an
///   x0 = 0
///   y0 = 0
///   x_end = 20
///
/// Optional keys: atol, rtol, h0, h_min, h_max, newton_tol, newton_max_iters,
/// max_steps, domain_start, grid_start, grid_end, grid_count,
/// grid_spacing ("linear" or "log"). Values are JSON scalars or string lists.
struct EquationConfig {
  int degree = 0;
  std::vector<std::string> coefficients;
  double x0 = 0.0;
  double y0 = 0.0;
  double x_end = 0.0;
  double domain_start = -std::numeric_limits<double>::infinity();
  SolverConfig solver;
  std::optional<double> grid_start;
  std::optional<double> grid_end;
  std::optional<std::size_t> grid_count;
  GridSpacing grid_spacing = GridSpacing::Linear;

  /// Throws Config on a count mismatch or unparsable coefficient.
  AbelEquation equation() const;
  GridSpec hypothesis_grid() const;
};

/// Throws Error(Config) with the offending line number.
EquationConfig parse_config(std::string_view text);
EquationConfig load_config(const std::string& path);

}  // namespace abel
