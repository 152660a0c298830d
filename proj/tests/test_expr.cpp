#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "abel/error.hpp"
#include "abel/expr.hpp"

using abel::Expr;
using abel::ErrorCode;

namespace {

ErrorCode code_of(const char* src, double x = 1.0) {
  try {
    Expr::parse(src).eval(x);
  } catch (const abel::Error& e) {
    return e.code();
  }
  FAIL("expected an error for " << src);
  return ErrorCode::Syntax;
}

}  // namespace

TEST_CASE("evaluates coefficient formulas") {
  CHECK(Expr::parse("1 - 1/x").eval(2.0) == 0.5);
  CHECK(Expr::parse("1 - 1/x").eval(1.0) == 0.0);
  CHECK(Expr::parse("3 - 2*exp(-2*x)").eval(0.0) == 1.0);
  CHECK(Expr::parse("x").eval(7.25) == 7.25);
  CHECK(Expr::parse("x/(x+1)").eval(3.0) == 0.75);
}

TEST_CASE("power is right-associative and binds tighter than unary minus") {
  CHECK(Expr::parse("2^3^2").eval(0.0) == 512.0);
  CHECK(Expr::parse("-2^2").eval(0.0) == -4.0);
  CHECK(Expr::parse("2^-1").eval(0.0) == 0.5);
  CHECK(Expr::parse("-x*3").eval(2.0) == -6.0);
  CHECK(Expr::parse("8/2/2").eval(0.0) == 2.0);
  CHECK(Expr::parse("8-2-2").eval(0.0) == 4.0);
}

TEST_CASE("numbers, constants and functions") {
  CHECK(Expr::parse("1.5e2").eval(0.0) == 150.0);
  CHECK(Expr::parse("2.5E-1").eval(0.0) == 0.25);
  CHECK(Expr::parse(".5").eval(0.0) == 0.5);
  CHECK(Expr::parse("pi").eval(0.0) == doctest::Approx(M_PI).epsilon(1e-16));
  CHECK(Expr::parse("e").eval(0.0) == doctest::Approx(M_E).epsilon(1e-16));
  CHECK(Expr::parse("sqrt(16) + abs(-3) + log(e)").eval(0.0) == doctest::Approx(8.0));
  // `e` followed by an exponent-less letter is the constant, not a malformed number.
  CHECK(Expr::parse("2*e").eval(0.0) == doctest::Approx(2.0 * M_E));
}

TEST_CASE("exp agrees with an extended-precision evaluation") {
  for (double x : {1.0, 0.1, 2.5, 10.0, -3.0}) {
    const long double ref = std::exp(-2.0L * static_cast<long double>(x));
    const double v = Expr::parse("exp(-2*x)").eval(x);
    CHECK(std::abs((v - ref) / ref) <= 1e-15L);
  }
}

TEST_CASE("parse errors carry a kind and an offset") {
  try {
    Expr::parse("1 + * 2");
    FAIL("no error");
  } catch (const abel::ParseError& e) {
    CHECK(e.code() == ErrorCode::Syntax);
    CHECK(e.offset() == 4);
  }
  try {
    Expr::parse("2 * foo(x)");
    FAIL("no error");
  } catch (const abel::ParseError& e) {
    CHECK(e.code() == ErrorCode::UnknownIdentifier);
    CHECK(e.offset() == 4);
  }
  CHECK(code_of("(1 + x") == ErrorCode::UnbalancedParentheses);
  CHECK(code_of("1 + x)") == ErrorCode::UnbalancedParentheses);
  CHECK(code_of("") == ErrorCode::Syntax);
  CHECK(code_of("y + 1") == ErrorCode::UnknownIdentifier);
}

TEST_CASE("evaluation errors instead of NaN or inf") {
  CHECK(code_of("sqrt(x)", -1.0) == ErrorCode::Domain);
  CHECK(code_of("log(x)", 0.0) == ErrorCode::Domain);
  CHECK(code_of("1/x", 0.0) == ErrorCode::DivisionByZero);
  CHECK(code_of("exp(x)", 1000.0) == ErrorCode::Overflow);
  CHECK(code_of("x^0.5", -4.0) == ErrorCode::Domain);
}

TEST_CASE("pretty-printed expressions re-parse to the same function") {
  const char* sources[] = {"1 - 1/x", "3 - 2*exp(-2*x)", "-x^2 + 2^x^0.5", "sqrt(abs(x)) * log(1 + x^2) / 3",
                           "x/(x+1)", "-(-x) - -1e-3*x", "pi*e^x"};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-3.0, 3.0);
  for (const char* s : sources) {
    const Expr a = Expr::parse(s);
    const Expr b = Expr::parse(a.to_string());
    CHECK(Expr::parse(b.to_string()).to_string() == b.to_string());
    for (int i = 0; i < 100; ++i) {
      const double x = ux(rng);
      double va = 0.0;
      try {
        va = a.eval(x);
      } catch (const abel::Error&) {
        CHECK_THROWS_AS(b.eval(x), abel::Error);
        continue;
      }
      const double vb = b.eval(x);
      CHECK(std::abs(va - vb) <= 1e-15 * std::max(1.0, std::abs(va)));
    }
  }
}

TEST_CASE("precedence of + over * on random constants") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const std::string src = Expr::constant(a).to_string() + "+" + Expr::constant(b).to_string() + "*" +
                            Expr::constant(c).to_string();
    CHECK(Expr::parse(src).eval(0.0) == a + (b * c));
  }
}

TEST_CASE("constant detection") {
  CHECK(Expr::parse("1 + 2*pi").is_constant());
  CHECK_FALSE(Expr::parse("1 + 0*x").is_constant());
}
