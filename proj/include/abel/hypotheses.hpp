#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abel/equilibrium.hpp"

namespace abel {

/// Lambda in (-kAlphaFloor, 0] is too close to a double root to call stable.
inline constexpr double kAlphaFloor = 1e-8;
/// B3 passes when the tail carries less than this share of the integral.
inline constexpr double kB3TailShare = 0.01;

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

struct Witness {
  std::optional<double> m;
  std::optional<double> alpha0;
  std::optional<double> L;
  std::optional<double> B3_integral;
  std::optional<double> worst_x;
  std::optional<double> worst_value;
};

struct HypothesisEntry {
  std::string id;  // A1..A4, B1..B3
  Verdict status = Verdict::Inconclusive;
  Witness witness;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisEntry> entries;
  std::optional<GridSpec> grid_spec;
  std::string notes;

  const HypothesisEntry* find(const std::string& id) const;
  /// Appends the entries of `other`.
  void merge(const HypothesisReport& other);
  /// True when every entry passed.
  bool all_pass() const;
  /// True when none of A1..A4, B1, B2 failed (B3 only affects the rate).
  bool plateau_hypotheses_hold() const;
  std::string table() const;
};

/// A1 (a_n > 0), A2 (finite lambdas) on `grid`; A3 (E > 0 at interior
/// branch points) and A4 (Lambda <= -kAlphaFloor) on the branch points.
HypothesisReport check_structural(const NormalForm& nf, const EquilibriumBranch& branch, std::span<const double> grid);

/// B1 (finite positive limit), B2 (inf of -Lambda positive), B3 (finite
/// int Phi^-1 |E'| with a small tail share). The tail is the last decade for a
/// log-spaced branch and the last 10% of the range otherwise.
HypothesisReport check_asymptotic(const NormalForm& nf, const EquilibriumBranch& branch);

/// Branch continuation plus both checks on one grid. A lost branch becomes a
/// failed A3 with the remaining branch-based entries inconclusive.
HypothesisReport verify(const NormalForm& nf, const GridSpec& grid);

}  // namespace abel
