#pragma once

#include <array>
#include <optional>
#include <vector>

#include "abel/core.hpp"
#include "abel/radau.hpp"
#include "abel/rate.hpp"

namespace abel {

/// sigma(x)^2 = sigma0_sq (1 + eta1 x + eta2 x^2).
struct MertonParams {
  double sigma0_sq = 2.0;
  double mu = -3.0;
  double r = 0.03;
  double eta1 = 1.0;
  double eta2 = 0.0;

  double Q(double x) const { return 1.0 + eta1 * x + eta2 * x * x; }
  void validate() const;
};

/// (a3, a2, a1, a0); x > 0, mu != 0.
std::array<double, 4> spread_coefficients(const MertonParams& p, double x);
/// (lambda2, lambda1, lambda0) from the closed forms; throws when Q(x) <= 0.
std::array<double, 3> spread_normal_form(const MertonParams& p, double x);

/// Stable root of (1/2) sigma^2 x^2 w^2 + mu x w - (s + r) = 0.
double omega_exact(const MertonParams& p, double x, double s);
/// Third-order expansion of omega_exact in s + r.
double omega_expansion(const MertonParams& p, double x, double s);
/// Residual of the quadratic at w.
double omega_residual(const MertonParams& p, double x, double s, double w);

inline constexpr std::array<double, 3> kCase1Lambdas{1.0, -3.0, 1.0};

struct CalibrationReport {
  double x_ref = 0.0;
  std::array<double, 3> lambdas{};  // (lambda2, lambda1, lambda0) at x_ref
  std::array<double, 3> target = kCase1Lambdas;
  double max_deviation = 0.0;
  /// eta2 placing lambda0(x_ref) = 1 when such a value exists, else the scan minimiser.
  std::optional<double> eta2_solved;
  std::optional<std::array<double, 3>> lambdas_solved;
  std::optional<double> max_deviation_solved;
};

CalibrationReport case1_calibration_check(const MertonParams& p, double x_ref, bool solve_eta2 = false);

/// Normal-form spread equation s' = s^3 + lambda2 s^2 + lambda1 s + lambda0.
AbelEquation spread_equation(const MertonParams& p, double x0);
/// Constant Case-1 coefficients (1, -3, 1).
AbelEquation literal_case1_equation(double x0);

struct SpreadCurve {
  std::vector<double> xs;
  std::vector<double> s;
  double plateau_bp = 0.0;
  PlateauDiagnostics diagnostics;
  IntegrationResult result;
};

/// Integrates s from s(x0) = 0 and attaches diagnostics; plateau_bp = 1e4 L_numeric.
/// No params means the literal Case-1 equation.
SpreadCurve spread_curve(const std::optional<MertonParams>& p, double x0, double x_end, const SolverConfig& config);

inline constexpr double kLiteralSpreadX0 = 0.0;
inline constexpr double kParametricSpreadX0 = 0.01;

}  // namespace abel
