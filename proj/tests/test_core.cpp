#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "abel/cases.hpp"
#include "abel/core.hpp"
#include "abel/error.hpp"
#include "abel/finance.hpp"
#include "helpers.hpp"

using namespace abel;
using testing_support::constant_equation;

TEST_CASE("normal form divides by the leading coefficient") {
  const NormalForm nf = normalize(get_case(1).equation);
  CHECK(nf.lambda(2, 3.0) == 1.0);
  CHECK(nf.lambda(1, 3.0) == -3.0);
  CHECK(nf.lambda(0, 3.0) == 1.0);

  const NormalForm scaled = normalize(constant_equation({2.0, 0.0, 0.0, 2.0}));
  CHECK(scaled.lambda(0, 0.5) == 1.0);
  CHECK(scaled.lambda(3, 0.5) == 1.0);
}

TEST_CASE("finance lambda2 from the closed form matches a2/a3") {
  const MertonParams p{2.0, -3.0, 0.03, 1.0, 0.0};
  const auto a = spread_coefficients(p, 1.0);
  const auto l = spread_normal_form(p, 1.0);
  CHECK(std::abs(l[0] - a[1] / a[0]) <= 1e-12 * std::abs(l[0]));
}

TEST_CASE("normalize rejects a vanishing leading coefficient") {
  CHECK_THROWS_AS(normalize(constant_equation({1.0, 1.0, 0.0})), Error);
  AbelEquation bad = testing_support::expr_equation({"1", "x - 2"});
  try {
    normalize(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LeadingCoefficientZero);
  }
}

TEST_CASE("validate checks the coefficient count and domain") {
  AbelEquation eq = constant_equation({1.0, -3.0, 1.0, 1.0});
  eq.degree = 2;
  CHECK_THROWS_AS(eq.validate(), Error);
  AbelEquation c2 = get_case(2).equation;
  c2.x0 = 0.5;
  CHECK_THROWS_AS(c2.validate(), Error);
}

TEST_CASE("right-hand side and normal-form values") {
  const AbelEquation c1 = get_case(1).equation;
  CHECK(eval_rhs(c1, 0.0, 1.0) == 0.0);
  CHECK(eval_rhs(c1, 0.0, 0.5) == -0.125);
  CHECK(eval_rhs(c1, 4.0, 0.0) == 1.0);

  const NormalForm nf1 = normalize(c1);
  const double root = std::sqrt(2.0) - 1.0;
  CHECK(eval_dF(nf1, 0.0, root) == doctest::Approx(4.0 - 4.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(eval_dF(nf1, 0.0, 1.0) == 2.0);
  CHECK(eval_F(nf1, 0.0, 0.0) == nf1.lambda(0, 0.0));

  // The x -> infinity polynomial of case 2 vanishes at (3 - sqrt 5)/2.
  const NormalForm limit = normalize(constant_equation({1.0, -2.0, -2.0, 1.0}));
  CHECK(std::abs(eval_F(limit, 0.0, (3.0 - std::sqrt(5.0)) / 2.0)) < 1e-15);

  const NormalForm nf3 = normalize(get_case(3).equation);
  CHECK(std::abs(eval_F(nf3, 0.0, 0.25410)) <= 5e-5);

  const NormalForm linear = normalize(constant_equation({-1.0, 1.0}));
  CHECK(eval_dF(linear, 3.0, 17.0) == 1.0);
}

TEST_CASE("Horner matches a naive power sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const AbelEquation c3 = get_case(3).equation;
  for (int i = 0; i < 500; ++i) {
    const double x = std::abs(u(rng)) * 5.0;
    const double y = u(rng);
    long double naive = 0.0L;
    long double scale = 0.0L;
    for (int k = 0; k <= 3; ++k) {
      const long double term = static_cast<long double>(c3.coeffs[k](x)) * std::pow(static_cast<long double>(y), k);
      naive += term;
      scale += std::abs(term);
    }
    CHECK(std::abs(eval_rhs(c3, x, y) - naive) <= 1e-13L * std::max(1.0L, scale));
  }
}

TEST_CASE("dF/dy matches a centred difference") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uy(-3.0, 3.0);
  std::uniform_real_distribution<double> ux(1.0, 20.0);
  for (int id : {1, 2, 3}) {
    const NormalForm nf = normalize(get_case(id).equation);
    for (int i = 0; i < 100; ++i) {
      const double x = ux(rng), y = uy(rng), h = 1e-6;
      const double fd = (eval_F(nf, x, y + h) - eval_F(nf, x, y - h)) / (2.0 * h);
      CHECK(std::abs(eval_dF(nf, x, y) - fd) <= 1e-6);
    }
  }
}

TEST_CASE("non-finite coefficient values raise") {
  const AbelEquation eq = testing_support::expr_equation({"1/x", "1"}, 1.0);
  CHECK_THROWS_AS(eval_rhs(eq, 0.0, 1.0), Error);
}
