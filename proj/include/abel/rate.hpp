#pragma once

#include <vector>

#include "abel/equilibrium.hpp"
#include "abel/radau.hpp"

namespace abel {

/// Phi(x) = exp(int_{x_base}^{x} a_n(s) Lambda(s) ds), x_base = first branch point.
///
/// The integral is accumulated by Simpson's rule on each branch interval with
/// a_n evaluated exactly and Lambda interpolated linearly.
class FundamentalSolution {
 public:
  FundamentalSolution(const NormalForm& nf, const EquilibriumBranch& branch);

  double x_base() const { return xs_.front(); }
  /// log Phi(x); throws BranchCoverage outside the branch.
  double log_phi(double x) const;
  double operator()(double x) const;

 private:
  NormalForm nf_;
  std::vector<double> xs_;
  std::vector<double> lambda_;
  std::vector<double> cum_;  // log Phi at the branch abscissae
};

double phi(const NormalForm& nf, const EquilibriumBranch& branch, double x);

/// C_R = max over branch points of sum_{k>=2} |d^k F / dy^k (x, E)| / k! * M_E^{k-2},
/// M_E = sup E.
double remainder_constant(const NormalForm& nf, const EquilibriumBranch& branch);

struct RateBound {
  std::vector<double> xs;     // trajectory abscissae
  std::vector<double> Phi;
  std::vector<double> bound;  // Phi(x) K(x)
  std::vector<double> K;      // may overflow to inf where Phi underflows; bound stays finite
  double C_R = 0.0;
  double sup_E = 0.0;   // M_E, the supremum of E
  double B3_integral = 0.0;   // int Phi^{-1} |E'| over the full range
  /// True where the remainder term exceeds half of K somewhere on the range.
  bool remainder_dominant = false;
};

/// A posteriori evaluation of
///   |y - E|(x) <= Phi(x) [ |z(x0)| + int Phi^-1 |E'| + C_R M_E int Phi^-1 |z| a_n ]
/// with z = y - E taken from the computed trajectory. The integrals are
/// accumulated in scaled form J(x) = Phi(x) int ... so that no term overflows.
/// Throws GridMismatch when the branch does not cover the trajectory.
RateBound rate_bound(const NormalForm& nf, const EquilibriumBranch& branch, const IntegrationResult& result);

struct PlateauDiagnostics {
  double L_numeric = 0.0;
  bool converged = false;
  bool trapping_ok = true;
  bool monotone_ok = true;
  double max_violation = 0.0;  // largest excursion outside [0, E] or below the previous y
  double window_start = 0.0;
};

inline constexpr double kPlateauTol = 1e-8;
inline constexpr double kPlateauWindow = 0.1;

/// Trapping 0 <= y <= E and monotonicity, each with slack 10 (atol + rtol |y|);
/// trapping is checked only where the branch exists (branch may be null).
/// converged means |y(x_end) - y(x_end - window)| <= kPlateauTol with the
/// window the last 10% of the range.
PlateauDiagnostics diagnose(const IntegrationResult& result, const EquilibriumBranch* branch,
                            const SolverConfig& config);

}  // namespace abel
