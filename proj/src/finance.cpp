#include "abel/finance.hpp"

#include <algorithm>
#include <cmath>

#include "abel/equilibrium.hpp"
#include "abel/error.hpp"

namespace abel {

void MertonParams::validate() const {
  if (!(sigma0_sq > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0_sq must be positive");
  if (mu == 0.0) throw Error(ErrorCode::InvalidArgument, "mu must be nonzero");
  if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "r must be non-negative");
}

std::array<double, 4> spread_coefficients(const MertonParams& p, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "spread coefficients need x > 0");
  if (p.mu == 0.0) throw Error(ErrorCode::InvalidArgument, "mu must be nonzero");
  const double q = p.Q(x);
  const double s2 = p.sigma0_sq;
  const double mu = p.mu;
  const double r = p.r;
  const double mu3 = mu * mu * mu;
  const double mu5 = mu3 * mu * mu;
  const double quad = s2 * s2 * q * q / (2.0 * mu5 * x);  // sigma^4 / (2 mu^5 x)
  const double lin = s2 * q / (2.0 * mu3 * x);             // sigma^2 / (2 mu^3 x)
  const double a3 = quad;
  const double a2 = -lin + 3.0 * r * quad;
  const double a1 = 1.0 / (mu * x) - 2.0 * r * lin + 3.0 * r * r * quad;
  const double a0 = r / (mu * x) - r * r * lin + r * r * r * quad;
  return {a3, a2, a1, a0};
}

std::array<double, 3> spread_normal_form(const MertonParams& p, double x) {
  const double q = p.Q(x);
  if (!(q > 0.0)) throw Error(ErrorCode::Domain, "volatility factor not positive at x=" + std::to_string(x));
  const double m2 = p.mu * p.mu / (p.sigma0_sq * q);  // mu^2 / sigma^2
  const double r = p.r;
  return {-m2 + 3.0 * r, 2.0 * m2 * m2 - 2.0 * m2 * r + 3.0 * r * r, 2.0 * m2 * m2 * r - m2 * r * r + r * r * r};
}

double omega_exact(const MertonParams& p, double x, double s) {
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega needs x > 0");
  const double sig2 = p.sigma0_sq * p.Q(x);
  const double delta = 2.0 * sig2 * (s + p.r);
  const double disc = p.mu * p.mu + delta;
  if (disc < 0.0) throw Error(ErrorCode::Domain, "negative discriminant");
  const double root = std::sqrt(disc);
  if (p.mu > 0.0) return 2.0 * (s + p.r) / (x * (p.mu + root));
  return (-p.mu + root) / (sig2 * x);
}

double omega_expansion(const MertonParams& p, double x, double s) {
  if (!(x > 0.0) || p.mu == 0.0) throw Error(ErrorCode::InvalidArgument, "omega expansion needs x > 0, mu != 0");
  const double sig2 = p.sigma0_sq * p.Q(x);
  const double u = s + p.r;
  const double mu = p.mu;
  const double mu3 = mu * mu * mu;
  return u / (mu * x) - sig2 * u * u / (2.0 * mu3 * x) + sig2 * sig2 * u * u * u / (2.0 * mu3 * mu * mu * x);
}

double omega_residual(const MertonParams& p, double x, double s, double w) {
  const double sig2 = p.sigma0_sq * p.Q(x);
  return 0.5 * sig2 * x * x * w * w + p.mu * x * w - (s + p.r);
}

namespace {

double max_dev(const std::array<double, 3>& l) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(l[i] - kCase1Lambdas[i]));
  return d;
}

// lambda0 - 1 as a function of the volatility factor Q alone.
double lambda0_gap(const MertonParams& p, double q) {
  const double m2 = p.mu * p.mu / (p.sigma0_sq * q);
  return 2.0 * m2 * m2 * p.r - m2 * p.r * p.r + p.r * p.r * p.r - 1.0;
}

}  // namespace

CalibrationReport case1_calibration_check(const MertonParams& p, double x_ref, bool solve_eta2) {
  CalibrationReport rep;
  rep.x_ref = x_ref;
  rep.lambdas = spread_normal_form(p, x_ref);
  rep.max_deviation = max_dev(rep.lambdas);
  if (!solve_eta2) return rep;
  if (!(x_ref > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta2 solve needs x_ref > 0");

  constexpr int kScan = 1200;
  double best_t = -6.0;
  double best = std::abs(lambda0_gap(p, 1e-6));
  std::optional<std::pair<double, double>> bracket;
  double prev_t = -6.0;
  double prev_g = lambda0_gap(p, 1e-6);
  for (int i = 1; i <= kScan; ++i) {
    const double t = -6.0 + 12.0 * i / kScan;
    const double g = lambda0_gap(p, std::pow(10.0, t));
    if (std::abs(g) < best) {
      best = std::abs(g);
      best_t = t;
    }
    if (!bracket && (g < 0.0) != (prev_g < 0.0)) bracket = {prev_t, t};
    prev_t = t;
    prev_g = g;
  }
  double t = best_t;
  if (bracket) {
    double lo = bracket->first;
    double hi = bracket->second;
    const double glo = lambda0_gap(p, std::pow(10.0, lo));
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((lambda0_gap(p, std::pow(10.0, mid)) < 0.0) == (glo < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t = 0.5 * (lo + hi);
  }
  const double q = std::pow(10.0, t);
  MertonParams solved = p;
  solved.eta2 = (q - 1.0 - p.eta1 * x_ref) / (x_ref * x_ref);
  rep.eta2_solved = solved.eta2;
  rep.lambdas_solved = spread_normal_form(solved, x_ref);
  rep.max_deviation_solved = max_dev(*rep.lambdas_solved);
  return rep;
}

AbelEquation spread_equation(const MertonParams& p, double x0) {
  p.validate();
  AbelEquation eq;
  eq.degree = 3;
  eq.x0 = x0;
  eq.description = "spread normal form";
  eq.coeffs.resize(4);
  const char* labels[] = {"lambda0", "lambda1", "lambda2"};
  for (int k = 0; k < 3; ++k) {
    eq.coeffs[static_cast<std::size_t>(k)] = CoefficientFn::from_callable(
        labels[k], [p, k](double x) { return spread_normal_form(p, x)[static_cast<std::size_t>(2 - k)]; },
        "spread normal form");
  }
  eq.coeffs[3] = CoefficientFn::constant("a3", 1.0);
  return eq;
}

AbelEquation literal_case1_equation(double x0) {
  AbelEquation eq;
  eq.degree = 3;
  eq.x0 = x0;
  eq.description = "spread with constant coefficients (1, -3, 1)";
  eq.coeffs = {CoefficientFn::constant("lambda0", 1.0), CoefficientFn::constant("lambda1", -3.0),
               CoefficientFn::constant("lambda2", 1.0), CoefficientFn::constant("a3", 1.0)};
  return eq;
}

SpreadCurve spread_curve(const std::optional<MertonParams>& p, double x0, double x_end, const SolverConfig& config) {
  const AbelEquation eq = p ? spread_equation(*p, x0) : literal_case1_equation(x0);
  SpreadCurve curve;
  curve.result = integrate(eq, 0.0, x_end, config);
  if (!curve.result.ok()) {
    throw Error(ErrorCode::IntegrationFailure,
                std::string("spread integration failed: ") + to_string(curve.result.status));
  }
  curve.xs = curve.result.xs;
  curve.s = curve.result.ys;

  std::optional<EquilibriumBranch> branch;
  try {
    branch = continue_branch(normalize(eq), std::span<const double>(curve.xs));
  } catch (const Error&) {
    branch.reset();
  }
  curve.diagnostics = diagnose(curve.result, branch ? &*branch : nullptr, config);
  curve.plateau_bp = 1e4 * curve.diagnostics.L_numeric;
  return curve;
}

}  // namespace abel
