#pragma once

#include <span>
#include <vector>

namespace abel::poly {

// Coefficient vectors are ascending: c[k] multiplies y^k.

double horner(std::span<const double> c, double y);

/// Coefficients of d/dy p.
std::vector<double> derivative(std::span<const double> c);

/// Coefficients t[k] of p(e + u) in powers of u, i.e. t[k] = p^{(k)}(e)/k!,
/// formed from exact integer binomials rather than differencing.
std::vector<double> taylor_shift(std::span<const double> c, double e);

double binomial(int n, int k);

/// Sum of |c_k| |y|^k: the magnitude scale against which |p(y)| is judged.
double magnitude(std::span<const double> c, double y);

}  // namespace abel::poly
