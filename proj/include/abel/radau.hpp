#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "abel/core.hpp"

namespace abel {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Vector3 = std::array<double, 3>;

struct ButcherTableau {
  static constexpr int s = 3;
  Matrix3 A{};
  Vector3 b{};
  Vector3 c{};
};

/// Three-stage Radau IIA: c1 < c2 are the interior roots of
/// d^2/dx^2 [x^2 (x - 1)^3], c3 = 1, and A solves the collocation conditions
/// sum_j A_ij c_j^{q-1} = c_i^q / q for q = 1..3. b is the last row of A.
ButcherTableau radau_tableau();

/// R(z) = (1 + 2z/5 + z^2/20) / (1 - 3z/5 + 3z^2/20 - z^3/60). Throws Pole.
std::complex<double> stability_value(std::complex<double> z);

/// Scalar right-hand side y' = f(x, y) with its y-derivative.
struct ScalarOde {
  std::function<double(double, double)> f;
  std::function<double(double, double)> dfdy;
};

ScalarOde make_ode(const AbelEquation& eq);

struct SolverConfig {
  double atol = 1e-9;
  double rtol = 1e-9;
  std::optional<double> h0;     // default 1e-3 (x_end - x0)
  double h_min = 1e-12;
  std::optional<double> h_max;  // default (x_end - x0) / 10
  double newton_tol = 1e-2;
  int newton_max_iters = 10;
  std::size_t max_steps = 10'000'000;
  /// Abscissae the integrator must land on exactly (besides x_end).
  std::vector<double> stops;

  void validate(double x0, double x_end) const;
};

/// One Radau IIA step from (x, y) with step h.
struct RadauStep {
  double y_next = 0.0;  // y + Z_3, which equals y + h sum_i b_i k_i (stiffly accurate)
  Vector3 Z{};          // stage increments Z_i = h sum_j A_ij k_j
  int newton_iters = 0;
  bool converged = false;
};

/// Solves the stage equations by simplified Newton with the Jacobian frozen at
/// (x, y) and stage predictor k_i = f(x, y). Convergence: |dZ|_inf below
/// newton_tol (atol + rtol |y|), with a floor at rounding level.
RadauStep radau_step(const ScalarOde& ode, double x, double y, double h, const ButcherTableau& tab,
                     const SolverConfig& config);

/// Step with step-doubling error estimate.
struct StepResult {
  double y_next = 0.0;     // single step of size h
  double y_refined = 0.0;  // two steps of size h/2; propagated by integrate()
  double err_est = 0.0;    // |y_next - y_refined| / (2^5 - 1)
  int newton_iters = 0;
  bool converged = false;
};

StepResult step(const ScalarOde& ode, double x, double y, double h, const ButcherTableau& tab,
                const SolverConfig& config);

enum class IntegrationStatus { Completed, StepFailure, NewtonFailure, MaxStepsExceeded };

const char* to_string(IntegrationStatus s);

struct IntegrationResult {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> h_used;              // 0 for the initial point
  std::vector<int> newton_iters_per_step;  // 0 for the initial point
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
  std::size_t n_newton_iters = 0;
  double final_x = 0.0;
  double final_y = 0.0;
  IntegrationStatus status = IntegrationStatus::Completed;

  bool ok() const { return status == IntegrationStatus::Completed; }
  /// Linear interpolation between accepted points; exact at accepted abscissae.
  double y_at(double x) const;
};

/// Adaptive integration from (x0, y0) to x_end. Accepts a step when
/// err_est <= atol + rtol |y|; the next step is h * clamp(0.9 (tol/err)^(1/6), 0.2, 5).
IntegrationResult integrate(const ScalarOde& ode, double x0, double y0, double x_end, const SolverConfig& config);
IntegrationResult integrate(const AbelEquation& eq, double y0, double x_end, const SolverConfig& config);

/// Constant-step integration (no error test); the step is adjusted so an
/// integer number of steps ends at x_end.
IntegrationResult integrate_fixed(const ScalarOde& ode, double x0, double y0, double x_end, double h,
                                  const SolverConfig& config);

struct OrderStudy {
  std::vector<double> hs;
  std::vector<double> errors;
  double reference = 0.0;
  double observed_order = 0.0;  // least-squares slope of log(error) against log(h)
};

/// Fixed-step errors at x_end against an adaptive reference at atol = rtol = 1e-12.
OrderStudy empirical_order(const AbelEquation& eq, double y0, double x_end, std::span<const double> h_list);
OrderStudy empirical_order(const ScalarOde& ode, double x0, double y0, double x_end, std::span<const double> h_list,
                           std::optional<double> exact = std::nullopt);

}  // namespace abel
