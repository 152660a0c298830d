#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "abel/core.hpp"

namespace abel {

/// Roots with |r| at or below this count as zero.
inline constexpr double kPositiveThreshold = 1e-12;
/// Number of trailing branch points used to estimate the limit L.
inline constexpr std::size_t kTailWindow = 16;
/// Relative spread of the tail window accepted as converged.
inline constexpr double kLimitTol = 1e-7;

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

/// All real roots of a polynomial with ascending coefficients `c` (leading
/// coefficient nonzero), ascending, each root reported once.
///
/// Roots are isolated between consecutive critical points (the real roots of
/// the derivative, found recursively) inside the Cauchy-type interval
/// [-R, R], R = 2(1 + max_k |c_k / c_n|); every monotone piece holds at most
/// one root, found by bisection to 1e-12 and polished by up to five Newton
/// steps. A critical point where |p| is at rounding level is a multiple root.
std::vector<RealRoot> polynomial_real_roots(std::span<const double> c);

std::vector<RealRoot> real_roots(const NormalForm& nf, double x);

/// Smallest root strictly above kPositiveThreshold, if any.
std::optional<double> smallest_positive_root(const NormalForm& nf, double x);

enum class GridSpacing { Linear, Log };

struct GridSpec {
  double x_start = 0.0;
  double x_end = 1.0;
  std::size_t count = 2;
  GridSpacing spacing = GridSpacing::Linear;
};

std::vector<double> make_grid(const GridSpec& spec);

struct BranchPoint {
  double x = 0.0;
  double E = 0.0;
  double Lambda = 0.0;   // dF/dy at (x, E); zero at a multiple root
  double E_prime = 0.0;  // NaN where Lambda == 0
  bool stable() const { return Lambda < 0.0; }
};

struct EquilibriumBranch {
  std::vector<BranchPoint> points;
  std::optional<double> L;
  std::optional<GridSpec> grid_spec;
  /// Abscissae where two positive stable roots coexisted; tracking kept the
  /// continued root.
  std::vector<double> ambiguous_x;

  double x_front() const { return points.front().x; }
  double x_back() const { return points.back().x; }
  bool covers(double x) const;
  /// Linear interpolation of E; exact at branch abscissae. Throws BranchCoverage.
  double E_at(double x) const;
  double sup_E() const;
};

/// Tracks the smallest-positive-root branch by nearest-root continuation.
///
/// The first point takes a root at zero when one exists (degenerate start,
/// e.g. a_0(x0) = 0), otherwise the smallest positive root. Each next point
/// takes the root nearest to the previous value, falling back to the smallest
/// positive root when the nearest root is negative. A move larger than
/// 0.25 (1 + |E_prev|) triggers one retry through the interval midpoint before
/// BranchLostError is thrown.
EquilibriumBranch continue_branch(const NormalForm& nf, std::span<const double> xs);
EquilibriumBranch continue_branch(const NormalForm& nf, const GridSpec& grid);

/// E'(x) = -dF/dx / Lambda with dF/dx by centred difference, step
/// max(1e-6, 1e-8 |x|); one-sided when x - h leaves the coefficient domain.
double branch_derivative(const NormalForm& nf, const BranchPoint& p);

/// Mean of the last kTailWindow values when their spread is within kLimitTol
/// relative; nullopt when inconclusive or too short.
std::optional<double> branch_limit(const EquilibriumBranch& branch);

}  // namespace abel
