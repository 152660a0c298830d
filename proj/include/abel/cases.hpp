#pragma once

#include <optional>
#include <vector>

#include "abel/equilibrium.hpp"
#include "abel/hypotheses.hpp"
#include "abel/radau.hpp"
#include "abel/rate.hpp"

namespace abel {

struct ReferenceRow {
  double x_max = 0.0;
  double y_ref = 0.0;
  double gap_ref = 0.0;
};

struct CaseStudy {
  int id = 0;
  AbelEquation equation;
  double exact_limit = 0.0;
  double x0 = 0.0;
  double default_x_end = 20.0;
  /// First abscissa of branch and hypothesis grids (x0 + 1e-3 for a degenerate start).
  double branch_start = 0.0;
  GridSpacing branch_spacing = GridSpacing::Linear;
  GridSpec hypothesis_grid;
  std::vector<ReferenceRow> reference_rows;
};

/// Cases 1..3; throws UnknownCase otherwise.
CaseStudy get_case(int id);

/// Same coefficients as case 2 with the grid starting at x0 = 1, where the
/// branch starts from zero.
GridSpec case2_endpoint_grid();

/// Cubic y^3 - y^2 - y + x/(x+1): the branch runs into a double root at y = 1
/// as x grows, so the stability eigenvalue decays to zero.
AbelEquation negative_example();
GridSpec negative_example_grid();

struct CaseRun {
  CaseStudy study;
  IntegrationResult result;
  EquilibriumBranch branch;  // on the trajectory abscissae plus a fine grid
  PlateauDiagnostics diagnostics;
  HypothesisReport hypotheses;
  std::optional<RateBound> rate;  // absent when the branch does not reach x0
  double gap = 0.0;               // |y(x_max) - exact_limit|
};

/// Branch, hypotheses, integration from y(x0) = 0, diagnostics and the gap.
CaseRun run_case(int id, double x_max, const SolverConfig& config);

/// Branch on the union of a fine grid over [start, x_end] and the given
/// abscissae (those at or after `start`).
EquilibriumBranch branch_on_trajectory(const NormalForm& nf, double start, double x_end, GridSpacing spacing,
                                       const std::vector<double>& xs);

}  // namespace abel
