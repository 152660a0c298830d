#include "abel/polynomial.hpp"

#include <cmath>

namespace abel::poly {

double horner(std::span<const double> c, double y) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
  return acc;
}

std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::vector<double> taylor_shift(std::span<const double> c, double e) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> t(c.size(), 0.0);
  for (int k = 0; k <= n; ++k) {
    // t_k = sum_{j>=k} C(j,k) c_j e^{j-k}, evaluated Horner-style in e.
    double acc = 0.0;
    for (int j = n; j >= k; --j) acc = acc * e + binomial(j, k) * c[j];
    t[k] = acc;
  }
  return t;
}

double magnitude(std::span<const double> c, double y) {
  double acc = 0.0;
  const double ay = std::abs(y);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ay + std::abs(*it);
  return acc;
}

}  // namespace abel::poly
