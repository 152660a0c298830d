#pragma once

#include <string>
#include <vector>

#include "abel/core.hpp"

namespace testing_support {

/// Degree-n equation from constant coefficients a0..an.
inline abel::AbelEquation constant_equation(const std::vector<double>& a, double x0 = 0.0) {
  abel::AbelEquation eq;
  eq.degree = static_cast<int>(a.size()) - 1;
  eq.x0 = x0;
  for (std::size_t k = 0; k < a.size(); ++k) eq.coeffs.push_back(abel::CoefficientFn::constant("a" + std::to_string(k), a[k]));
  return eq;
}

/// Degree-n equation from coefficient expressions a0..an.
inline abel::AbelEquation expr_equation(const std::vector<std::string>& a, double x0 = 0.0) {
  abel::AbelEquation eq;
  eq.degree = static_cast<int>(a.size()) - 1;
  eq.x0 = x0;
  for (std::size_t k = 0; k < a.size(); ++k) eq.coeffs.push_back(abel::CoefficientFn::from_string("a" + std::to_string(k), a[k]));
  return eq;
}

}  // namespace testing_support

#include <cmath>

namespace testing_support {

/// Exact case-1 solution from y(0) = 0. With F = (y - r1)(y - r2)(y - r3),
/// separation gives x(y) = sum_i A_i ln|(y - r_i) / r_i|, A_i = 1 / prod_{j != i}(r_i - r_j);
/// x(y) is increasing on [0, r2) and is inverted by bisection in long double.
inline double case1_exact(double x) {
  const long double s2 = std::sqrt(2.0L);
  const long double r[3] = {-1.0L - s2, -1.0L + s2, 1.0L};
  long double A[3];
  for (int i = 0; i < 3; ++i) {
    long double prod = 1.0L;
    for (int j = 0; j < 3; ++j) {
      if (j != i) prod *= r[i] - r[j];
    }
    A[i] = 1.0L / prod;
  }
  auto x_of = [&](long double y) {
    long double acc = 0.0L;
    for (int i = 0; i < 3; ++i) acc += A[i] * std::log(std::abs((y - r[i]) / r[i]));
    return acc;
  };
  long double lo = 0.0L, hi = r[1];
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (x_of(mid) < x) lo = mid; else hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace testing_support
