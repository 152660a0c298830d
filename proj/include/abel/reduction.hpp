#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abel/core.hpp"
#include "abel/radau.hpp"

namespace abel {

enum class SolutionKind { EquilibriumRoot, ExplicitSolution };

/// A known solution E_p of the original equation.
struct ParticularSolution {
  SolutionKind kind = SolutionKind::ExplicitSolution;
  std::function<double(double)> value;
  std::string label;

  static ParticularSolution constant_root(double r);
  static ParticularSolution explicit_solution(std::function<double(double)> f, std::string label);
};

/// Residual above which a declared particular solution is rejected.
inline constexpr double kSolutionTol = 1e-8;

/// u' = sum_{k=1}^{N} c_k(x) u^k for u = y - E_p.
struct ReducedEquation {
  int degree = 0;
  std::vector<std::function<double(double)>> c;  // c[0] = c_1 .. c[N-1] = c_N
  ParticularSolution particular;

  double c_at(int k, double x) const { return c.at(static_cast<std::size_t>(k - 1))(x); }
  /// The reduced equation as an AbelEquation with a zero constant term.
  AbelEquation as_equation(double x0) const;
};

/// c_k(x) = sum_{j>=k} C(j,k) a_j(x) E_p(x)^{j-k}, the k-th Taylor coefficient
/// of the right-hand side at E_p. Throws NotASolution when E_p fails its
/// residual check at the probe points x0 + {0, 0.5, 1, 2, 5, 10}.
ReducedEquation reduce(const AbelEquation& eq, const ParticularSolution& ep);

/// Residual of E_p at x: |F(x,E_p)| relative to the coefficient magnitude for
/// equilibrium roots, |E_p' - rhs| (centred difference) for explicit solutions.
double particular_residual(const AbelEquation& eq, const ParticularSolution& ep, double x);

/// -v' = c1 v + c2 + c3 / v under v = 1/u.
struct SecondKind {
  std::function<double(double)> c1, c2, c3;
  /// -v' for given (x, v).
  double minus_dv(double x, double v) const { return c1(x) * v + c2(x) + c3(x) / v; }
};

/// Throws WrongDegree unless red.degree == 3.
SecondKind to_second_kind(const ReducedEquation& red);

struct RoundTrip {
  double max_discrepancy = 0.0;
  IntegrationResult original;
  IntegrationResult reduced;
};

/// Integrates y from y0 and u from y0 - E_p(x0) (landing on every accepted
/// abscissa of y), and returns max |y - (E_p + u)| over those abscissae.
RoundTrip roundtrip_check(const AbelEquation& eq, const ParticularSolution& ep, double y0, double x_end,
                          const SolverConfig& config);

}  // namespace abel
