#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "abel/expr.hpp"

namespace abel {

/// One coefficient a_k(x) of the polynomial right-hand side.
struct CoefficientFn {
  std::string label;
  std::function<double(double)> fn;
  std::string source;  // expression text, or a description for callables
  double domain_start = -std::numeric_limits<double>::infinity();

  static CoefficientFn from_expr(std::string label, const Expr& e,
                                 double domain_start = -std::numeric_limits<double>::infinity());
  static CoefficientFn from_string(std::string label, std::string_view text,
                                   double domain_start = -std::numeric_limits<double>::infinity());
  static CoefficientFn constant(std::string label, double value);
  static CoefficientFn from_callable(std::string label, std::function<double(double)> f, std::string source,
                                     double domain_start = -std::numeric_limits<double>::infinity());

  /// Throws abel::Error when the value is not finite.
  double operator()(double x) const;
};

/// y' = sum_{k=0}^{n} a_k(x) y^k on [x0, inf).
struct AbelEquation {
  int degree = 0;
  std::vector<CoefficientFn> coeffs;  // a_0 .. a_n
  double x0 = 0.0;
  std::string description;

  const CoefficientFn& leading() const { return coeffs.back(); }
  double domain_start() const;

  /// Coefficient values a_0(x)..a_n(x).
  std::vector<double> coeffs_at(double x) const;

  /// Throws InvalidArgument on a malformed equation (count mismatch, x0 before
  /// a coefficient's domain, a_n vanishing on every probe point).
  void validate() const;
};

/// F(x, y) = y^n + sum_{k<n} lambda_k(x) y^k with lambda_k = a_k / a_n.
class NormalForm {
 public:
  explicit NormalForm(AbelEquation eq);

  int degree() const { return eq_.degree; }
  const AbelEquation& equation() const { return eq_; }
  double a_n(double x) const { return eq_.leading()(x); }
  double lambda(int k, double x) const;
  double domain_start() const { return eq_.domain_start(); }

  /// Monic coefficients (lambda_0(x), ..., lambda_{n-1}(x), 1).
  std::vector<double> coeffs_at(double x) const;

 private:
  AbelEquation eq_;
};

/// Checks a_n at probe points and builds the normal form.
NormalForm normalize(const AbelEquation& eq);

/// sum_k a_k(x) y^k by Horner.
double eval_rhs(const AbelEquation& eq, double x, double y);
/// d/dy of eval_rhs, i.e. a_n(x) dF/dy.
double eval_rhs_dy(const AbelEquation& eq, double x, double y);

double eval_F(const NormalForm& nf, double x, double y);
double eval_dF(const NormalForm& nf, double x, double y);

}  // namespace abel
