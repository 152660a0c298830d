#include "abel/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "abel/error.hpp"
#include "abel/polynomial.hpp"

namespace abel {

ParticularSolution ParticularSolution::constant_root(double r) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", r);
  return {SolutionKind::EquilibriumRoot, [r](double) { return r; }, buf};
}

ParticularSolution ParticularSolution::explicit_solution(std::function<double(double)> f, std::string label) {
  return {SolutionKind::ExplicitSolution, std::move(f), std::move(label)};
}

AbelEquation ReducedEquation::as_equation(double x0) const {
  AbelEquation eq;
  eq.degree = degree;
  eq.x0 = x0;
  eq.description = "reduced about " + particular.label;
  eq.coeffs.push_back(CoefficientFn::constant("c0", 0.0));
  for (int k = 1; k <= degree; ++k) {
    eq.coeffs.push_back(CoefficientFn::from_callable("c" + std::to_string(k), c[static_cast<std::size_t>(k - 1)],
                                                     "taylor coefficient"));
  }
  return eq;
}

double particular_residual(const AbelEquation& eq, const ParticularSolution& ep, double x) {
  const double e = ep.value(x);
  if (ep.kind == SolutionKind::EquilibriumRoot) {
    const auto c = eq.coeffs_at(x);
    return std::abs(poly::horner(c, e)) / std::max(1.0, poly::magnitude(c, e));
  }
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  double slope;
  if (x - h < eq.domain_start()) {
    slope = (ep.value(x + h) - e) / h;
  } else {
    slope = (ep.value(x + h) - ep.value(x - h)) / (2.0 * h);
  }
  return std::abs(slope - eval_rhs(eq, x, e));
}

ReducedEquation reduce(const AbelEquation& eq, const ParticularSolution& ep) {
  eq.validate();
  const std::array<double, 6> offsets{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  const double e0 = ep.value(eq.x0);
  for (double d : offsets) {
    const double x = eq.x0 + d;
    const double res = particular_residual(eq, ep, x);
    if (!(res <= kSolutionTol)) {
      throw Error(ErrorCode::NotASolution, "particular solution residual " + std::to_string(res) +
                                               " at x=" + std::to_string(x));
    }
    // A root of F(x, .) solves the ODE only if it does not move with x.
    if (ep.kind == SolutionKind::EquilibriumRoot &&
        std::abs(ep.value(x) - e0) > 1e-12 * std::max(1.0, std::abs(e0))) {
      throw Error(ErrorCode::NotASolution, "equilibrium root varies with x");
    }
  }

  ReducedEquation red;
  red.degree = eq.degree;
  red.particular = ep;
  for (int k = 1; k <= eq.degree; ++k) {
    red.c.push_back([eq, ep, k](double x) {
      const auto t = poly::taylor_shift(eq.coeffs_at(x), ep.value(x));
      return t[static_cast<std::size_t>(k)];
    });
  }
  return red;
}

SecondKind to_second_kind(const ReducedEquation& red) {
  if (red.degree != 3) throw Error(ErrorCode::WrongDegree, "second-kind form needs degree 3");
  return {red.c[0], red.c[1], red.c[2]};
}

RoundTrip roundtrip_check(const AbelEquation& eq, const ParticularSolution& ep, double y0, double x_end,
                          const SolverConfig& config) {
  const ReducedEquation red = reduce(eq, ep);
  RoundTrip rt;
  rt.original = integrate(eq, y0, x_end, config);
  if (!rt.original.ok()) throw Error(ErrorCode::IntegrationFailure, "original integration failed");
  SolverConfig landing = config;
  landing.stops = rt.original.xs;
  rt.reduced = integrate(red.as_equation(eq.x0), y0 - ep.value(eq.x0), x_end, landing);
  if (!rt.reduced.ok()) throw Error(ErrorCode::IntegrationFailure, "reduced integration failed");

  for (std::size_t i = 0; i < rt.original.xs.size(); ++i) {
    const double x = rt.original.xs[i];
    const double u = rt.reduced.y_at(x);
    rt.max_discrepancy = std::max(rt.max_discrepancy, std::abs(rt.original.ys[i] - (ep.value(x) + u)));
  }
  return rt;
}

}  // namespace abel
