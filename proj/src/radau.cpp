#include "abel/radau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abel/error.hpp"

namespace abel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// LU factorisation with partial pivoting of a 3x3 matrix.
class Lu3 {
 public:
  explicit Lu3(Matrix3 m) : lu_(m) {
    for (int i = 0; i < 3; ++i) perm_[i] = i;
    for (int k = 0; k < 3; ++k) {
      int p = k;
      for (int i = k + 1; i < 3; ++i) {
        if (std::abs(lu_[i][k]) > std::abs(lu_[p][k])) p = i;
      }
      if (lu_[p][k] == 0.0) {
        singular_ = true;
        return;
      }
      std::swap(lu_[p], lu_[k]);
      std::swap(perm_[p], perm_[k]);
      for (int i = k + 1; i < 3; ++i) {
        lu_[i][k] /= lu_[k][k];
        for (int j = k + 1; j < 3; ++j) lu_[i][j] -= lu_[i][k] * lu_[k][j];
      }
    }
  }

  bool singular() const { return singular_; }

  Vector3 solve(const Vector3& rhs) const {
    Vector3 x{};
    for (int i = 0; i < 3; ++i) {
      double acc = rhs[perm_[i]];
      for (int j = 0; j < i; ++j) acc -= lu_[i][j] * x[j];
      x[i] = acc;
    }
    for (int i = 2; i >= 0; --i) {
      double acc = x[i];
      for (int j = i + 1; j < 3; ++j) acc -= lu_[i][j] * x[j];
      x[i] = acc / lu_[i][i];
    }
    return x;
  }

 private:
  Matrix3 lu_;
  std::array<int, 3> perm_{};
  bool singular_ = false;
};

}  // namespace

ButcherTableau radau_tableau() {
  ButcherTableau t;
  const double s6 = std::sqrt(6.0);
  t.c = {(4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0};

  Matrix3 vandermonde{};
  for (int q = 0; q < 3; ++q) {
    for (int j = 0; j < 3; ++j) vandermonde[q][j] = std::pow(t.c[j], q);
  }
  const Lu3 lu(vandermonde);
  for (int i = 0; i < 3; ++i) {
    Vector3 rhs{};
    for (int q = 0; q < 3; ++q) rhs[q] = std::pow(t.c[i], q + 1) / (q + 1);
    t.A[i] = lu.solve(rhs);
  }
  t.b = t.A[2];
  return t;
}

std::complex<double> stability_value(std::complex<double> z) {
  const std::complex<double> num = 1.0 + z * (2.0 / 5.0 + z / 20.0);
  const std::complex<double> den = 1.0 + z * (-3.0 / 5.0 + z * (3.0 / 20.0 - z / 60.0));
  if (den == 0.0) throw Error(ErrorCode::Pole, "stability function pole");
  return num / den;
}

ScalarOde make_ode(const AbelEquation& eq) {
  return {[eq](double x, double y) { return eval_rhs(eq, x, y); },
          [eq](double x, double y) { return eval_rhs_dy(eq, x, y); }};
}

void SolverConfig::validate(double x0, double x_end) const {
  if (!(atol > 0.0) || !(rtol > 0.0)) throw Error(ErrorCode::InvalidArgument, "atol and rtol must be positive");
  if (!(x_end > x0)) throw Error(ErrorCode::InvalidArgument, "x_end must exceed x0");
  const double span = x_end - x0;
  const double start = h0.value_or(1e-3 * span);
  const double top = h_max.value_or(span / 10.0);
  if (!(h_min > 0.0) || !(h_min <= start) || !(start <= top)) {
    throw Error(ErrorCode::InvalidArgument, "step bounds must satisfy 0 < h_min <= h0 <= h_max");
  }
  if (!(newton_tol > 0.0) || newton_max_iters < 1 || max_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid Newton or step limits");
  }
}

RadauStep radau_step(const ScalarOde& ode, double x, double y, double h, const ButcherTableau& tab,
                     const SolverConfig& config) {
  RadauStep out;
  try {
    const double f0 = ode.f(x, y);
    const double jac = ode.dfdy(x, y);
    Matrix3 m{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] = (i == j ? 1.0 : 0.0) - h * jac * tab.A[i][j];
    }
    const Lu3 lu(m);
    if (lu.singular()) return out;

    Vector3 Z{};
    for (int i = 0; i < 3; ++i) Z[i] = tab.c[i] * h * f0;

    const double tol = config.newton_tol * (config.atol + config.rtol * std::abs(y));
    double prev_norm = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= config.newton_max_iters; ++it) {
      Vector3 fz{};
      for (int i = 0; i < 3; ++i) fz[i] = ode.f(x + tab.c[i] * h, y + Z[i]);
      Vector3 g{};
      for (int i = 0; i < 3; ++i) {
        double acc = Z[i];
        for (int j = 0; j < 3; ++j) acc -= h * tab.A[i][j] * fz[j];
        g[i] = -acc;
      }
      const Vector3 dz = lu.solve(g);
      double norm = 0.0;
      double zmax = 0.0;
      for (int i = 0; i < 3; ++i) {
        Z[i] += dz[i];
        norm = std::max(norm, std::abs(dz[i]));
        zmax = std::max(zmax, std::abs(Z[i]));
      }
      out.newton_iters = it;
      if (!std::isfinite(norm)) return out;
      const double floor = 64.0 * kEps * (std::abs(y) + zmax);
      if (norm <= std::max(tol, floor)) {
        out.converged = true;
        break;
      }
      if (it >= 2 && norm >= prev_norm) return out;
      prev_norm = norm;
    }
    if (!out.converged) return out;
    out.Z = Z;
    out.y_next = y + Z[2];
    if (!std::isfinite(out.y_next)) out.converged = false;
  } catch (const Error&) {
    out.converged = false;
  }
  return out;
}

StepResult step(const ScalarOde& ode, double x, double y, double h, const ButcherTableau& tab,
                const SolverConfig& config) {
  StepResult out;
  const RadauStep full = radau_step(ode, x, y, h, tab, config);
  out.newton_iters = full.newton_iters;
  if (!full.converged) return out;
  const RadauStep half1 = radau_step(ode, x, y, 0.5 * h, tab, config);
  out.newton_iters += half1.newton_iters;
  if (!half1.converged) return out;
  const RadauStep half2 = radau_step(ode, x + 0.5 * h, half1.y_next, 0.5 * h, tab, config);
  out.newton_iters += half2.newton_iters;
  if (!half2.converged) return out;
  out.y_next = full.y_next;
  out.y_refined = half2.y_next;
  out.err_est = std::abs(full.y_next - half2.y_next) / 31.0;
  out.converged = true;
  return out;
}

const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::Completed: return "completed";
    case IntegrationStatus::StepFailure: return "step-failure";
    case IntegrationStatus::NewtonFailure: return "newton-failure";
    case IntegrationStatus::MaxStepsExceeded: return "max-steps-exceeded";
  }
  return "unknown";
}

double IntegrationResult::y_at(double x) const {
  if (xs.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (xs[i] == x) return ys[i];
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

namespace {

void record(IntegrationResult& r, double x, double y, double h, int iters) {
  r.xs.push_back(x);
  r.ys.push_back(y);
  r.h_used.push_back(h);
  r.newton_iters_per_step.push_back(iters);
}

}  // namespace

IntegrationResult integrate(const ScalarOde& ode, double x0, double y0, double x_end, const SolverConfig& config) {
  config.validate(x0, x_end);
  const ButcherTableau tab = radau_tableau();
  const double span = x_end - x0;
  const double h_max = config.h_max.value_or(span / 10.0);

  std::vector<double> stops;
  for (double s : config.stops) {
    if (s > x0 && s < x_end) stops.push_back(s);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(x_end);
  std::size_t next_stop = 0;

  IntegrationResult r;
  record(r, x0, y0, 0.0, 0);
  double x = x0;
  double y = y0;
  double h = std::min(config.h0.value_or(1e-3 * span), h_max);

  while (x < x_end) {
    if (r.n_accepted >= config.max_steps) {
      r.status = IntegrationStatus::MaxStepsExceeded;
      break;
    }
    h = std::min(h, h_max);
    const double target = stops[next_stop];
    const double planned = h;
    const bool landing = x + h >= target;
    if (landing) h = target - x;

    const StepResult st = step(ode, x, y, h, tab, config);
    r.n_newton_iters += static_cast<std::size_t>(st.newton_iters);
    if (!st.converged) {
      ++r.n_rejected;
      h *= 0.5;
      if (h < config.h_min) {
        r.status = IntegrationStatus::NewtonFailure;
        break;
      }
      continue;
    }

    const double tol = config.atol + config.rtol * std::max(std::abs(y), std::abs(st.y_refined));
    const double factor =
        st.err_est == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / st.err_est, 1.0 / 6.0), 0.2, 5.0);
    if (st.err_est <= tol) {
      x = landing ? target : x + h;
      if (landing) ++next_stop;
      y = st.y_refined;
      ++r.n_accepted;
      record(r, x, y, h, st.newton_iters);
      h = landing ? std::max(h * factor, planned) : h * factor;
    } else {
      ++r.n_rejected;
      h *= factor;
      if (h < config.h_min) {
        r.status = IntegrationStatus::StepFailure;
        break;
      }
    }
  }
  r.final_x = x;
  r.final_y = y;
  return r;
}

IntegrationResult integrate(const AbelEquation& eq, double y0, double x_end, const SolverConfig& config) {
  return integrate(make_ode(eq), eq.x0, y0, x_end, config);
}

IntegrationResult integrate_fixed(const ScalarOde& ode, double x0, double y0, double x_end, double h,
                                  const SolverConfig& config) {
  if (!(h > 0.0) || !(x_end > x0)) throw Error(ErrorCode::InvalidArgument, "fixed step needs h > 0 and x_end > x0");
  const ButcherTableau tab = radau_tableau();
  const auto n = std::max<long long>(1, std::llround((x_end - x0) / h));
  const double he = (x_end - x0) / static_cast<double>(n);

  IntegrationResult r;
  record(r, x0, y0, 0.0, 0);
  double y = y0;
  for (long long i = 0; i < n; ++i) {
    const double x = x0 + he * static_cast<double>(i);
    const RadauStep st = radau_step(ode, x, y, he, tab, config);
    r.n_newton_iters += static_cast<std::size_t>(st.newton_iters);
    if (!st.converged) {
      r.status = IntegrationStatus::NewtonFailure;
      break;
    }
    y = st.y_next;
    ++r.n_accepted;
    record(r, i + 1 == n ? x_end : x0 + he * static_cast<double>(i + 1), y, he, st.newton_iters);
  }
  r.final_x = r.xs.back();
  r.final_y = y;
  return r;
}

OrderStudy empirical_order(const ScalarOde& ode, double x0, double y0, double x_end, std::span<const double> h_list,
                           std::optional<double> exact) {
  if (h_list.size() < 3) throw Error(ErrorCode::InvalidArgument, "order study needs at least three step sizes");
  OrderStudy study;
  if (exact) {
    study.reference = *exact;
  } else {
    SolverConfig ref;
    ref.atol = 1e-12;
    ref.rtol = 1e-12;
    const IntegrationResult rr = integrate(ode, x0, y0, x_end, ref);
    if (!rr.ok()) throw Error(ErrorCode::ReferenceFailure, "reference integration failed");
    study.reference = rr.final_y;
  }

  SolverConfig fixed;
  fixed.atol = 1e-14;
  fixed.rtol = 1e-14;
  fixed.newton_max_iters = 50;
  for (double h : h_list) {
    const IntegrationResult r = integrate_fixed(ode, x0, y0, x_end, h, fixed);
    if (!r.ok()) throw Error(ErrorCode::ReferenceFailure, "fixed-step run failed");
    study.hs.push_back(h);
    study.errors.push_back(std::abs(r.final_y - study.reference));
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < study.hs.size(); ++i) {
    if (!(study.errors[i] > 0.0)) continue;
    const double lx = std::log(study.hs[i]);
    const double ly = std::log(study.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  study.observed_order = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  return study;
}

OrderStudy empirical_order(const AbelEquation& eq, double y0, double x_end, std::span<const double> h_list) {
  return empirical_order(make_ode(eq), eq.x0, y0, x_end, h_list);
}

}  // namespace abel
