#include "abel/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "abel/error.hpp"
#include "abel/rate.hpp"

namespace abel {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

const HypothesisEntry* HypothesisReport::find(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

void HypothesisReport::merge(const HypothesisReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  if (!grid_spec) grid_spec = other.grid_spec;
  if (!other.notes.empty()) notes += (notes.empty() ? "" : "; ") + other.notes;
}

bool HypothesisReport::all_pass() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.status == Verdict::Pass; });
}

bool HypothesisReport::plateau_hypotheses_hold() const {
  for (const auto& e : entries) {
    if (e.id != "B3" && e.status == Verdict::Fail) return false;
  }
  return true;
}

std::string HypothesisReport::table() const {
  std::string out = "id  status        witness\n";
  char buf[160];
  for (const auto& e : entries) {
    std::string w;
    auto add = [&](const char* name, const std::optional<double>& v) {
      if (!v) return;
      std::snprintf(buf, sizeof buf, "%s%s=%.9g", w.empty() ? "" : " ", name, *v);
      w += buf;
    };
    add("m", e.witness.m);
    add("alpha0", e.witness.alpha0);
    add("L", e.witness.L);
    add("B3_integral", e.witness.B3_integral);
    add("worst_x", e.witness.worst_x);
    add("worst_value", e.witness.worst_value);
    std::snprintf(buf, sizeof buf, "%-3s %-13s ", e.id.c_str(), to_string(e.status));
    out += buf + w;
    if (!e.note.empty()) out += (w.empty() ? "" : "  ") + e.note;
    out += '\n';
  }
  return out;
}

namespace {

HypothesisEntry check_a1(const NormalForm& nf, std::span<const double> grid) {
  HypothesisEntry e{"A1", Verdict::Pass, {}, "grid-verified"};
  double m = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  try {
    for (double x : grid) {
      const double an = nf.a_n(x);
      if (an < m) {
        m = an;
        worst = x;
      }
    }
  } catch (const Error& err) {
    e.status = Verdict::Fail;
    e.note = err.what();
    return e;
  }
  e.witness.m = m;
  e.witness.worst_x = worst;
  if (!(m > 0.0)) {
    e.status = Verdict::Fail;
    e.note = "leading coefficient not positive";
  }
  return e;
}

HypothesisEntry check_a2(const NormalForm& nf, std::span<const double> grid) {
  HypothesisEntry e{"A2", Verdict::Pass, {}, "grid-verified"};
  for (double x : grid) {
    try {
      for (double v : nf.coeffs_at(x)) {
        if (!std::isfinite(v)) throw Error(ErrorCode::Overflow, "non-finite normal-form coefficient");
      }
    } catch (const Error& err) {
      e.status = Verdict::Fail;
      e.witness.worst_x = x;
      e.note = err.what();
      return e;
    }
  }
  return e;
}

HypothesisEntry check_a3(const EquilibriumBranch& branch) {
  HypothesisEntry e{"A3", Verdict::Pass, {}, "grid-verified"};
  const std::size_t n = branch.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const BranchPoint& p = branch.points[i];
    if (p.E > kPositiveThreshold) continue;
    e.witness.worst_x = p.x;
    e.witness.worst_value = p.E;
    if (i == 0 || i + 1 == n) {
      e.status = Verdict::Inconclusive;
      e.note = "branch touches zero at a grid endpoint";
    } else {
      e.status = Verdict::Fail;
      e.note = "branch not positive at an interior point";
      return e;
    }
  }
  return e;
}

HypothesisEntry check_a4(const EquilibriumBranch& branch) {
  HypothesisEntry e{"A4", Verdict::Pass, {}, "grid-verified"};
  double alpha0 = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& p : branch.points) {
    if (-p.Lambda < alpha0) {
      alpha0 = -p.Lambda;
      worst = p.x;
    }
  }
  e.witness.alpha0 = alpha0;
  e.witness.worst_x = worst;
  e.witness.worst_value = -alpha0;
  if (alpha0 < 0.0) {
    e.status = Verdict::Fail;
    e.note = "unstable branch point";
  } else if (alpha0 < kAlphaFloor) {
    e.status = Verdict::Inconclusive;
    e.note = "stability eigenvalue within the double-root floor";
  }
  return e;
}

}  // namespace

HypothesisReport check_structural(const NormalForm& nf, const EquilibriumBranch& branch, std::span<const double> grid) {
  HypothesisReport r;
  r.grid_spec = branch.grid_spec;
  r.entries.push_back(check_a1(nf, grid));
  r.entries.push_back(check_a2(nf, grid));
  r.entries.push_back(check_a3(branch));
  r.entries.push_back(check_a4(branch));
  if (!branch.ambiguous_x.empty()) r.notes = "competing stable roots at " + std::to_string(branch.ambiguous_x.size()) + " points";
  return r;
}

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

HypothesisEntry check_b3(const NormalForm& nf, const EquilibriumBranch& branch) {
  HypothesisEntry e{"B3", Verdict::Pass, {}, "grid-verified"};
  const auto& pts = branch.points;
  if (pts.size() < 2) {
    e.status = Verdict::Inconclusive;
    e.note = "branch too short";
    return e;
  }
  const FundamentalSolution fs(nf, branch);
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_g(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::isnan(pts[i].E_prime)) {
      e.status = Verdict::Inconclusive;
      e.witness.worst_x = pts[i].x;
      e.note = "branch derivative undefined at a multiple root";
      return e;
    }
    const double a = std::abs(pts[i].E_prime);
    log_g[i] = (a == 0.0 ? ninf : std::log(a)) - fs.log_phi(pts[i].x);
  }

  const double x0 = pts.front().x;
  const double x1 = pts.back().x;
  const bool log_spaced = branch.grid_spec && branch.grid_spec->spacing == GridSpacing::Log;
  double tail_start = x1 - kPlateauWindow * (x1 - x0);
  if (log_spaced && x1 / 10.0 > x0) tail_start = x1 / 10.0;

  double log_total = ninf;
  double log_tail = ninf;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double h = pts[i + 1].x - pts[i].x;
    const double piece = std::log(0.5 * h) + log_add(log_g[i], log_g[i + 1]);
    log_total = log_add(log_total, piece);
    if (pts[i].x >= tail_start) log_tail = log_add(log_tail, piece);
  }

  const double total = std::exp(log_total);
  e.witness.B3_integral = total;
  e.witness.worst_x = tail_start;
  if (log_total == ninf) return e;
  const double share = std::exp(log_tail - log_total);
  e.witness.worst_value = share;
  if (!std::isfinite(total)) {
    e.status = Verdict::Fail;
    e.note = "integral overflows; Phi^-1 |E'| diverges";
  } else if (!(share < kB3TailShare)) {
    e.status = Verdict::Inconclusive;
    e.note = "tail share of the integral not small";
  }
  return e;
}

}  // namespace

HypothesisReport check_asymptotic(const NormalForm& nf, const EquilibriumBranch& branch) {
  HypothesisReport r;
  r.grid_spec = branch.grid_spec;

  HypothesisEntry b1{"B1", Verdict::Pass, {}, "grid-verified"};
  const auto L = branch_limit(branch);
  const double sup = branch.sup_E();
  if (!L) {
    b1.status = Verdict::Inconclusive;
    b1.note = "tail of the branch has not settled";
  } else {
    b1.witness.L = *L;
    if (!(*L > 0.0) || !std::isfinite(sup)) {
      b1.status = Verdict::Fail;
      b1.note = "limit not positive and finite";
    }
  }
  b1.witness.worst_value = sup;
  r.entries.push_back(b1);

  HypothesisEntry b2 = check_a4(branch);
  b2.id = "B2";
  if (b2.status == Verdict::Fail) b2.note = "damping changes sign";
  r.entries.push_back(b2);

  r.entries.push_back(check_b3(nf, branch));
  return r;
}

HypothesisReport verify(const NormalForm& nf, const GridSpec& grid) {
  const auto xs = make_grid(grid);
  try {
    const EquilibriumBranch branch = continue_branch(nf, grid);
    HypothesisReport r = check_structural(nf, branch, xs);
    r.merge(check_asymptotic(nf, branch));
    r.grid_spec = grid;
    return r;
  } catch (const BranchLostError& lost) {
    HypothesisReport r;
    r.grid_spec = grid;
    r.entries.push_back(check_a1(nf, xs));
    r.entries.push_back(check_a2(nf, xs));
    HypothesisEntry a3{"A3", Verdict::Fail, {}, "branch lost"};
    a3.witness.worst_x = lost.x();
    r.entries.push_back(a3);
    for (const char* id : {"A4", "B1", "B2", "B3"}) r.entries.push_back({id, Verdict::Inconclusive, {}, "no branch"});
    return r;
  }
}

}  // namespace abel
