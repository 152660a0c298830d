#include "abel/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "abel/error.hpp"
#include "abel/polynomial.hpp"

namespace abel {

CoefficientFn CoefficientFn::from_expr(std::string label, const Expr& e, double domain_start) {
  return {std::move(label), [e](double x) { return e.eval(x); }, e.to_string(), domain_start};
}

CoefficientFn CoefficientFn::from_string(std::string label, std::string_view text, double domain_start) {
  const Expr e = Expr::parse(text);
  return {std::move(label), [e](double x) { return e.eval(x); }, std::string(text), domain_start};
}

CoefficientFn CoefficientFn::constant(std::string label, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return {std::move(label), [value](double) { return value; }, buf,
          -std::numeric_limits<double>::infinity()};
}

CoefficientFn CoefficientFn::from_callable(std::string label, std::function<double(double)> f,
                                           std::string source, double domain_start) {
  return {std::move(label), std::move(f), std::move(source), domain_start};
}

double CoefficientFn::operator()(double x) const {
  const double v = fn(x);
  if (!std::isfinite(v)) throw Error(ErrorCode::Overflow, "coefficient " + label + " is not finite");
  return v;
}

double AbelEquation::domain_start() const {
  double d = -std::numeric_limits<double>::infinity();
  for (const auto& c : coeffs) d = std::max(d, c.domain_start);
  return d;
}

std::vector<double> AbelEquation::coeffs_at(double x) const {
  std::vector<double> v(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) v[k] = coeffs[k](x);
  return v;
}

namespace {

std::array<double, 6> probe_points(double x0) {
  return {x0, x0 + 0.5, x0 + 1.0, x0 + 2.0, x0 + 10.0, x0 + 100.0};
}

}  // namespace

void AbelEquation::validate() const {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  if (coeffs.size() != static_cast<std::size_t>(degree) + 1) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(degree + 1) + " coefficients, got " +
                                                std::to_string(coeffs.size()));
  }
  if (!std::isfinite(x0)) throw Error(ErrorCode::InvalidArgument, "x0 must be finite");
  if (x0 < domain_start()) throw Error(ErrorCode::InvalidArgument, "x0 precedes a coefficient domain");
}

NormalForm::NormalForm(AbelEquation eq) : eq_(std::move(eq)) {}

double NormalForm::lambda(int k, double x) const {
  if (k == eq_.degree) return 1.0;
  const double an = a_n(x);
  if (an == 0.0) throw Error(ErrorCode::LeadingCoefficientZero, "a_n vanishes at x=" + std::to_string(x));
  return eq_.coeffs[k](x) / an;
}

std::vector<double> NormalForm::coeffs_at(double x) const {
  std::vector<double> c = eq_.coeffs_at(x);
  const double an = c.back();
  if (an == 0.0) throw Error(ErrorCode::LeadingCoefficientZero, "a_n vanishes at x=" + std::to_string(x));
  for (auto& v : c) v /= an;
  c.back() = 1.0;
  return c;
}

NormalForm normalize(const AbelEquation& eq) {
  eq.validate();
  for (double x : probe_points(eq.x0)) {
    if (eq.leading()(x) == 0.0) {
      throw Error(ErrorCode::LeadingCoefficientZero, "a_n vanishes at probe x=" + std::to_string(x));
    }
  }
  return NormalForm(eq);
}

double eval_rhs(const AbelEquation& eq, double x, double y) {
  double acc = 0.0;
  for (auto it = eq.coeffs.rbegin(); it != eq.coeffs.rend(); ++it) acc = acc * y + (*it)(x);
  return acc;
}

double eval_rhs_dy(const AbelEquation& eq, double x, double y) {
  double acc = 0.0;
  for (int k = eq.degree; k >= 1; --k) acc = acc * y + k * eq.coeffs[k](x);
  return acc;
}

double eval_F(const NormalForm& nf, double x, double y) {
  const auto c = nf.coeffs_at(x);
  return poly::horner(c, y);
}

double eval_dF(const NormalForm& nf, double x, double y) {
  const auto c = nf.coeffs_at(x);
  double acc = 0.0;
  for (int k = nf.degree(); k >= 1; --k) acc = acc * y + k * c[k];
  return acc;
}

}  // namespace abel
