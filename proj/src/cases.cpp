#include "abel/cases.hpp"

#include <algorithm>
#include <cmath>

#include "abel/error.hpp"

namespace abel {

namespace {

constexpr std::size_t kFineGrid = 2001;

AbelEquation cubic(const char* a0, const char* a1, const char* a2, const char* a3, double x0, double a0_domain,
                   const char* description) {
  AbelEquation eq;
  eq.degree = 3;
  eq.x0 = x0;
  eq.description = description;
  eq.coeffs = {CoefficientFn::from_string("a0", a0, a0_domain), CoefficientFn::from_string("a1", a1),
               CoefficientFn::from_string("a2", a2), CoefficientFn::from_string("a3", a3)};
  return eq;
}

}  // namespace

CaseStudy get_case(int id) {
  const double ninf = -std::numeric_limits<double>::infinity();
  CaseStudy c;
  c.id = id;
  switch (id) {
    case 1:
      c.equation = cubic("1", "-3", "1", "1", 0.0, ninf, "case 1: y^3 + y^2 - 3y + 1");
      c.exact_limit = std::sqrt(2.0) - 1.0;
      c.hypothesis_grid = {0.0, 20.0, 401, GridSpacing::Linear};
      c.reference_rows = {{20.0, 0.41421356, 1e-12}};
      break;
    case 2:
      c.equation = cubic("1 - 1/x", "-2", "-2", "1", 1.0, 1.0, "case 2: y^3 - 2y^2 - 2y + 1 - 1/x");
      c.exact_limit = (3.0 - std::sqrt(5.0)) / 2.0;
      c.branch_start = 1.001;
      c.branch_spacing = GridSpacing::Log;
      c.hypothesis_grid = {1.001, 1e8, 801, GridSpacing::Log};
      c.reference_rows = {{20.0, 0.36572, 1.6e-2}, {2000.0, 0.38157, 4e-4}, {2e5, 0.38196, 5e-6}};
      break;
    case 3:
      c.equation = cubic("3 - 2*exp(-2*x)", "-4", "0", "1", 0.0, ninf, "case 3: y^3 - 4y + 3 - 2exp(-2x)");
      c.exact_limit = 1.0;
      c.hypothesis_grid = {0.0, 20.0, 401, GridSpacing::Linear};
      c.reference_rows = {{20.0, 0.99999998, 2e-8}};
      break;
    default:
      throw Error(ErrorCode::UnknownCase, "unknown case " + std::to_string(id));
  }
  c.x0 = c.equation.x0;
  if (id != 2) c.branch_start = c.x0;
  return c;
}

GridSpec case2_endpoint_grid() { return {1.0, 1e8, 801, GridSpacing::Log}; }

AbelEquation negative_example() {
  return cubic("x/(x+1)", "-1", "-1", "1", 0.0, 0.0, "y^3 - y^2 - y + x/(x+1)");
}

GridSpec negative_example_grid() { return {1e-3, 1e18, 841, GridSpacing::Log}; }

EquilibriumBranch branch_on_trajectory(const NormalForm& nf, double start, double x_end, GridSpacing spacing,
                                       const std::vector<double>& xs) {
  std::vector<double> grid = make_grid({start, x_end, kFineGrid, spacing});
  for (double x : xs) {
    if (x >= start && x <= x_end) grid.push_back(x);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return continue_branch(nf, std::span<const double>(grid));
}

CaseRun run_case(int id, double x_max, const SolverConfig& config) {
  CaseRun run;
  run.study = get_case(id);
  if (!(x_max > run.study.x0)) throw Error(ErrorCode::InvalidArgument, "x_max must exceed x0");
  const NormalForm nf = normalize(run.study.equation);

  run.hypotheses = verify(nf, run.study.hypothesis_grid);
  run.result = integrate(run.study.equation, 0.0, x_max, config);
  run.branch = branch_on_trajectory(nf, run.study.branch_start, x_max, run.study.branch_spacing, run.result.xs);
  run.diagnostics = diagnose(run.result, &run.branch, config);
  if (run.branch.covers(run.result.xs.front())) run.rate = rate_bound(nf, run.branch, run.result);
  run.gap = std::abs(run.result.final_y - run.study.exact_limit);
  return run;
}

}  // namespace abel
