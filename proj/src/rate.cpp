#include "abel/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abel/error.hpp"
#include "abel/polynomial.hpp"

namespace abel {

namespace {

std::size_t interval_of(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0;
  const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}

// Linear interpolation of a branch field; exact at branch abscissae.
template <class Field>
double branch_field(const EquilibriumBranch& b, double x, Field field) {
  auto it = std::lower_bound(b.points.begin(), b.points.end(), x,
                             [](const BranchPoint& p, double v) { return p.x < v; });
  if (it == b.points.end()) return field(b.points.back());
  if (it->x == x || it == b.points.begin()) return field(*it);
  const BranchPoint& hi = *it;
  const BranchPoint& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return field(lo) + t * (field(hi) - field(lo));
}

}  // namespace

FundamentalSolution::FundamentalSolution(const NormalForm& nf, const EquilibriumBranch& branch) : nf_(nf) {
  if (branch.points.empty()) throw Error(ErrorCode::BranchCoverage, "empty branch");
  for (const auto& p : branch.points) {
    xs_.push_back(p.x);
    lambda_.push_back(p.Lambda);
  }
  cum_.assign(xs_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    const double a = xs_[i];
    const double b = xs_[i + 1];
    const double mid = 0.5 * (a + b);
    const double g0 = nf_.a_n(a) * lambda_[i];
    const double gm = nf_.a_n(mid) * 0.5 * (lambda_[i] + lambda_[i + 1]);
    const double g1 = nf_.a_n(b) * lambda_[i + 1];
    cum_[i + 1] = cum_[i] + (b - a) / 6.0 * (g0 + 4.0 * gm + g1);
  }
}

double FundamentalSolution::log_phi(double x) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(x));
  if (x < xs_.front() - slack || x > xs_.back() + slack) {
    throw Error(ErrorCode::BranchCoverage, "fundamental solution undefined at x=" + std::to_string(x));
  }
  if (xs_.size() == 1 || x <= xs_.front()) return 0.0;
  x = std::min(x, xs_.back());
  const std::size_t i = interval_of(xs_, x);
  const double a = xs_[i];
  if (x == a) return cum_[i];
  const double w = xs_[i + 1] - a;
  auto lam = [&](double s) { return lambda_[i] + (s - a) / w * (lambda_[i + 1] - lambda_[i]); };
  const double mid = 0.5 * (a + x);
  const double g0 = nf_.a_n(a) * lambda_[i];
  const double gm = nf_.a_n(mid) * lam(mid);
  const double g1 = nf_.a_n(x) * lam(x);
  return cum_[i] + (x - a) / 6.0 * (g0 + 4.0 * gm + g1);
}

double FundamentalSolution::operator()(double x) const { return std::exp(log_phi(x)); }

double phi(const NormalForm& nf, const EquilibriumBranch& branch, double x) {
  return FundamentalSolution(nf, branch)(x);
}

double remainder_constant(const NormalForm& nf, const EquilibriumBranch& branch) {
  const double m_e = branch.sup_E();
  double c_r = 0.0;
  for (const auto& p : branch.points) {
    const auto t = poly::taylor_shift(nf.coeffs_at(p.x), p.E);
    double acc = 0.0;
    double scale = 1.0;
    for (std::size_t k = 2; k < t.size(); ++k) {
      acc += std::abs(t[k]) * scale;
      scale *= m_e;
    }
    c_r = std::max(c_r, acc);
  }
  return c_r;
}

RateBound rate_bound(const NormalForm& nf, const EquilibriumBranch& branch, const IntegrationResult& result) {
  if (result.xs.empty()) throw Error(ErrorCode::GridMismatch, "empty trajectory");
  const double x_lo = result.xs.front();
  const double x_hi = result.xs.back();
  if (!branch.covers(x_lo) || !branch.covers(x_hi)) {
    throw Error(ErrorCode::GridMismatch, "branch does not cover the trajectory");
  }

  std::vector<double> grid = result.xs;
  for (const auto& p : branch.points) {
    if (p.x > x_lo && p.x < x_hi) grid.push_back(p.x);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const FundamentalSolution fs(nf, branch);
  RateBound rb;
  rb.C_R = remainder_constant(nf, branch);
  rb.sup_E = branch.sup_E();
  const double nonlinear = rb.C_R * rb.sup_E;
  const double z0 = std::abs(result.ys.front() - branch.E_at(x_lo));

  std::size_t next_traj = 0;
  double log_prev = 0.0, j2 = 0.0, j3 = 0.0, g2_prev = 0.0, g3_prev = 0.0, x_prev = 0.0;
  const double log_base = fs.log_phi(x_lo);
  double log_phi_x = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    log_phi_x = fs.log_phi(x) - log_base;
    const double e = branch.E_at(x);
    const double g2 = std::abs(branch_field(branch, x, [](const BranchPoint& p) { return p.E_prime; }));
    const double g3 = std::abs(result.y_at(x) - e) * nf.a_n(x);
    if (i > 0) {
      const double r = std::exp(log_phi_x - log_prev);
      const double h = x - x_prev;
      j2 = j2 * r + 0.5 * h * (g2_prev * r + g2);
      j3 = j3 * r + 0.5 * h * (g3_prev * r + g3);
    }
    log_prev = log_phi_x;
    g2_prev = g2;
    g3_prev = g3;
    x_prev = x;

    if (next_traj < result.xs.size() && result.xs[next_traj] == x) {
      const double ph = std::exp(log_phi_x);
      const double scaled_first = z0 * ph;
      const double total = scaled_first + j2 + nonlinear * j3;
      rb.xs.push_back(x);
      rb.Phi.push_back(ph);
      rb.bound.push_back(total);
      rb.K.push_back(total / ph);
      if (nonlinear * j3 > 0.5 * total) rb.remainder_dominant = true;
      ++next_traj;
    }
  }
  rb.B3_integral = j2 / std::exp(log_phi_x);
  return rb;
}

PlateauDiagnostics diagnose(const IntegrationResult& result, const EquilibriumBranch* branch,
                            const SolverConfig& config) {
  PlateauDiagnostics d;
  if (result.xs.empty()) return d;
  auto slack = [&](double y) { return 10.0 * (config.atol + config.rtol * std::abs(y)); };

  for (std::size_t i = 0; i < result.xs.size(); ++i) {
    const double x = result.xs[i];
    const double y = result.ys[i];
    const double tol = slack(y);
    if (y < 0.0) {
      d.max_violation = std::max(d.max_violation, -y);
      if (-y > tol) d.trapping_ok = false;
    }
    if (branch && branch->covers(x)) {
      const double over = y - branch->E_at(x);
      if (over > 0.0) {
        d.max_violation = std::max(d.max_violation, over);
        if (over > tol) d.trapping_ok = false;
      }
    }
    if (i > 0) {
      const double drop = result.ys[i - 1] - y;
      if (drop > 0.0) {
        d.max_violation = std::max(d.max_violation, drop);
        if (drop > tol) d.monotone_ok = false;
      }
    }
  }

  const double x_end = result.xs.back();
  d.window_start = x_end - kPlateauWindow * (x_end - result.xs.front());
  d.L_numeric = result.ys.back();
  d.converged = std::abs(d.L_numeric - result.y_at(d.window_start)) <= kPlateauTol;
  return d;
}

}  // namespace abel
