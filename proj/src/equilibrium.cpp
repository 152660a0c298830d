#include "abel/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abel/error.hpp"
#include "abel/polynomial.hpp"

namespace abel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kBisectTol = 1e-12;
constexpr int kNewtonPolishSteps = 5;

bool is_rounding_zero(std::span<const double> c, double y, double value) {
  return std::abs(value) <= 32.0 * kEps * poly::magnitude(c, y);
}

int multiplicity_at(std::span<const double> c, double y) {
  int m = 1;
  std::vector<double> d = poly::derivative(c);
  while (d.size() > 1 || d[0] != 0.0) {
    const double v = poly::horner(d, y);
    if (std::abs(v) > 1e-6 * poly::magnitude(d, y)) break;
    ++m;
    if (d.size() == 1) break;
    d = poly::derivative(d);
  }
  return m;
}

double bisect(std::span<const double> c, double lo, double hi, double flo) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kBisectTol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) break;
    const double fm = poly::horner(c, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double newton_polish(std::span<const double> c, double y) {
  const std::vector<double> d = poly::derivative(c);
  double fy = poly::horner(c, y);
  for (int it = 0; it < kNewtonPolishSteps && fy != 0.0; ++it) {
    const double dy = poly::horner(d, y);
    if (dy == 0.0) break;
    const double cand = y - fy / dy;
    const double fc = poly::horner(c, cand);
    if (!(std::abs(fc) < std::abs(fy))) break;
    y = cand;
    fy = fc;
  }
  return y;
}

}  // namespace

std::vector<RealRoot> polynomial_real_roots(std::span<const double> coeffs) {
  std::vector<double> c(coeffs.begin(), coeffs.end());
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {};
  const double lead = c.back();
  for (auto& v : c) v /= lead;
  c.back() = 1.0;
  if (n == 1) return {RealRoot{-c[0], 1}};

  double max_coeff = 0.0;
  for (int k = 0; k < n; ++k) max_coeff = std::max(max_coeff, std::abs(c[k]));
  const double bound = 2.0 * (1.0 + max_coeff);

  // Critical points split [-R, R] into pieces on which p is monotone.
  std::vector<double> breaks{-bound};
  for (const RealRoot& r : polynomial_real_roots(poly::derivative(c))) {
    if (r.value > breaks.back() && r.value < bound) breaks.push_back(r.value);
  }
  breaks.push_back(bound);

  std::vector<double> values(breaks.size());
  std::vector<bool> zero(breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    values[i] = poly::horner(c, breaks[i]);
    zero[i] = values[i] == 0.0 || is_rounding_zero(c, breaks[i], values[i]);
  }

  std::vector<RealRoot> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (zero[i]) {
      const bool interior = i > 0;
      roots.push_back({breaks[i], interior ? std::max(2, multiplicity_at(c, breaks[i])) : 1});
      continue;
    }
    if (zero[i + 1]) continue;
    if ((values[i] < 0.0) != (values[i + 1] < 0.0)) {
      const double r = bisect(c, breaks[i], breaks[i + 1], values[i]);
      roots.push_back({newton_polish(c, r), 1});
    }
  }
  if (zero.back()) roots.push_back({breaks.back(), 1});

  std::sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

std::vector<RealRoot> real_roots(const NormalForm& nf, double x) { return polynomial_real_roots(nf.coeffs_at(x)); }

std::optional<double> smallest_positive_root(const NormalForm& nf, double x) {
  for (const RealRoot& r : real_roots(nf, x)) {
    if (r.value > kPositiveThreshold) return r.value;
  }
  return std::nullopt;
}

std::vector<double> make_grid(const GridSpec& spec) {
  if (spec.count < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  if (!(spec.x_end > spec.x_start)) throw Error(ErrorCode::InvalidArgument, "grid end must exceed start");
  std::vector<double> xs(spec.count);
  const double last = static_cast<double>(spec.count - 1);
  if (spec.spacing == GridSpacing::Linear) {
    const double h = (spec.x_end - spec.x_start) / last;
    for (std::size_t i = 0; i < spec.count; ++i) xs[i] = spec.x_start + h * static_cast<double>(i);
  } else {
    if (!(spec.x_start > 0.0)) throw Error(ErrorCode::InvalidArgument, "log grid needs a positive start");
    const double a = std::log(spec.x_start);
    const double b = std::log(spec.x_end);
    for (std::size_t i = 0; i < spec.count; ++i) xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / last);
  }
  xs.front() = spec.x_start;
  xs.back() = spec.x_end;
  return xs;
}

bool EquilibriumBranch::covers(double x) const {
  if (points.empty()) return false;
  const double slack = 1e-12 * std::max(1.0, std::abs(x));
  return x >= x_front() - slack && x <= x_back() + slack;
}

double EquilibriumBranch::E_at(double x) const {
  if (!covers(x)) throw Error(ErrorCode::BranchCoverage, "branch does not cover x=" + std::to_string(x));
  auto it = std::lower_bound(points.begin(), points.end(), x,
                             [](const BranchPoint& p, double v) { return p.x < v; });
  if (it == points.end()) return points.back().E;
  if (it->x == x || it == points.begin()) return it->E;
  const BranchPoint& hi = *it;
  const BranchPoint& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.E + t * (hi.E - lo.E);
}

double EquilibriumBranch::sup_E() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::max(m, p.E);
  return m;
}

namespace {

double jump_threshold(double prev) { return 0.25 * (1.0 + std::abs(prev)); }

std::optional<RealRoot> track(const std::vector<RealRoot>& roots, double prev) {
  const RealRoot* nearest = nullptr;
  for (const auto& r : roots) {
    if (!nearest || std::abs(r.value - prev) < std::abs(nearest->value - prev)) nearest = &r;
  }
  if (!nearest) return std::nullopt;
  const RealRoot* pick = nearest;
  if (nearest->value < -kPositiveThreshold) {
    pick = nullptr;
    for (const auto& r : roots) {
      if (r.value > kPositiveThreshold) {
        pick = &r;
        break;
      }
    }
    if (!pick) return std::nullopt;
  }
  if (std::abs(pick->value - prev) > jump_threshold(prev)) return std::nullopt;
  return *pick;
}

BranchPoint make_point(const NormalForm& nf, double x, const RealRoot& root) {
  BranchPoint p;
  p.x = x;
  p.E = std::abs(root.value) <= kPositiveThreshold ? 0.0 : root.value;
  p.Lambda = root.multiplicity > 1 ? 0.0 : eval_dF(nf, x, p.E);
  p.E_prime = p.Lambda != 0.0 ? branch_derivative(nf, p) : std::numeric_limits<double>::quiet_NaN();
  return p;
}

bool has_competing_stable_root(const NormalForm& nf, double x, const std::vector<RealRoot>& roots) {
  int stable_positive = 0;
  for (const auto& r : roots) {
    if (r.value > kPositiveThreshold && r.multiplicity == 1 && eval_dF(nf, x, r.value) < 0.0) ++stable_positive;
  }
  return stable_positive >= 2;
}

}  // namespace

EquilibriumBranch continue_branch(const NormalForm& nf, std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::InvalidArgument, "empty branch grid");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "branch grid must be strictly increasing");
  }

  EquilibriumBranch branch;
  branch.points.reserve(xs.size());

  auto roots = real_roots(nf, xs[0]);
  std::optional<RealRoot> start;
  for (const auto& r : roots) {
    if (std::abs(r.value) <= kPositiveThreshold) start = r;
  }
  if (!start) {
    for (const auto& r : roots) {
      if (r.value > kPositiveThreshold) {
        start = r;
        break;
      }
    }
  }
  if (!start) throw BranchLostError(xs[0]);
  branch.points.push_back(make_point(nf, xs[0], *start));
  if (has_competing_stable_root(nf, xs[0], roots)) branch.ambiguous_x.push_back(xs[0]);

  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double prev = branch.points.back().E;
    roots = real_roots(nf, xs[i]);
    std::optional<RealRoot> next = track(roots, prev);
    if (!next) {
      const double mid = 0.5 * (xs[i - 1] + xs[i]);
      if (auto via = track(real_roots(nf, mid), prev)) next = track(roots, via->value);
    }
    if (!next) throw BranchLostError(xs[i]);
    branch.points.push_back(make_point(nf, xs[i], *next));
    if (has_competing_stable_root(nf, xs[i], roots)) branch.ambiguous_x.push_back(xs[i]);
  }
  branch.L = branch_limit(branch);
  return branch;
}

EquilibriumBranch continue_branch(const NormalForm& nf, const GridSpec& grid) {
  const auto xs = make_grid(grid);
  EquilibriumBranch b = continue_branch(nf, std::span<const double>(xs));
  b.grid_spec = grid;
  return b;
}

double branch_derivative(const NormalForm& nf, const BranchPoint& p) {
  if (p.Lambda == 0.0) {
    throw Error(ErrorCode::ZeroEigenvalue, "zero stability eigenvalue at x=" + std::to_string(p.x));
  }
  const double h = std::max(1e-6, 1e-8 * std::abs(p.x));
  double dFdx;
  if (p.x - h < nf.domain_start()) {
    dFdx = (eval_F(nf, p.x + h, p.E) - eval_F(nf, p.x, p.E)) / h;
  } else {
    dFdx = (eval_F(nf, p.x + h, p.E) - eval_F(nf, p.x - h, p.E)) / (2.0 * h);
  }
  return -dFdx / p.Lambda;
}

std::optional<double> branch_limit(const EquilibriumBranch& branch) {
  if (branch.points.size() < kTailWindow) return std::nullopt;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (std::size_t i = branch.points.size() - kTailWindow; i < branch.points.size(); ++i) {
    const double e = branch.points[i].E;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    sum += e;
  }
  const double mean = sum / static_cast<double>(kTailWindow);
  if (hi - lo > kLimitTol * std::abs(mean)) return std::nullopt;
  return mean;
}

}  // namespace abel
