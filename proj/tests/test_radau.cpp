#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "abel/cases.hpp"
#include "abel/error.hpp"
#include "abel/radau.hpp"
#include "helpers.hpp"

using namespace abel;
using testing_support::case1_exact;

namespace {

ScalarOde linear_ode(double lambda) {
  return {[lambda](double, double y) { return lambda * y; }, [lambda](double, double) { return lambda; }};
}

}  // namespace

TEST_CASE("tableau matches the closed form") {
  const ButcherTableau t = radau_tableau();
  const double s6 = std::sqrt(6.0);
  const double A[3][3] = {{(88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0},
                          {(296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0},
                          {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(std::abs(t.A[i][j] - A[i][j]) <= 1e-15);
  }
  CHECK(t.c[0] == doctest::Approx((4.0 - s6) / 10.0).epsilon(1e-15));
  CHECK(t.c[1] == doctest::Approx((4.0 + s6) / 10.0).epsilon(1e-15));
  CHECK(t.c[2] == 1.0);
  CHECK(t.b == t.A[2]);
}

TEST_CASE("c1 and c2 are the interior roots of d2/dx2 [x^2 (x-1)^3]") {
  // x^2 (x-1)^3 = x^5 - 3x^4 + 3x^3 - x^2; second derivative 20x^3 - 36x^2 + 18x - 2.
  const ButcherTableau t = radau_tableau();
  for (int i = 0; i < 3; ++i) {
    const double c = t.c[i];
    CHECK(std::abs(20.0 * c * c * c - 36.0 * c * c + 18.0 * c - 2.0) <= 1e-14);
  }
}

TEST_CASE("order conditions") {
  const ButcherTableau t = radau_tableau();
  for (int q = 1; q <= 5; ++q) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += t.b[i] * std::pow(t.c[i], q - 1);
    CHECK(std::abs(s - 1.0 / q) <= 1e-13);
  }
  for (int i = 0; i < 3; ++i) {
    for (int q = 1; q <= 3; ++q) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += t.A[i][j] * std::pow(t.c[j], q - 1);
      CHECK(std::abs(s - std::pow(t.c[i], q) / q) <= 1e-13);
    }
  }
}

TEST_CASE("stability function") {
  CHECK(stability_value(0.0) == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(stability_value(-1e4)) <= 1e-3);
  CHECK(std::abs(stability_value(-1e4)) == doctest::Approx(3e-4).epsilon(0.01));
  for (double y : {0.1, 1.0, 10.0, 100.0}) CHECK(std::abs(stability_value({0.0, y})) <= 1.0 + 1e-14);
  // Pade (2,3) approximant of exp: agrees with exp(z) to O(z^6).
  CHECK(std::abs(stability_value(0.01) - std::exp(0.01)) <= 1e-13);
}

TEST_CASE("zero right-hand side leaves y unchanged") {
  const ScalarOde zero{[](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
  const auto st = step(zero, 0.0, 3.5, 0.1, radau_tableau(), SolverConfig{});
  REQUIRE(st.converged);
  CHECK(st.y_next == 3.5);
  CHECK(st.err_est == 0.0);
}

TEST_CASE("one step on a stiff linear problem reproduces R(lambda h)") {
  const ButcherTableau tab = radau_tableau();
  const auto st = radau_step(linear_ode(-1e6), 0.0, 1.0, 1.0, tab, SolverConfig{});
  REQUIRE(st.converged);
  const double r = stability_value(-1e6).real();
  CHECK(std::abs(st.y_next - r) <= 1e-10 * std::abs(r));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> expo(0.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double z = -std::pow(10.0, expo(rng));
    const auto s = radau_step(linear_ode(z), 0.0, 1.0, 1.0, tab, SolverConfig{});
    REQUIRE(s.converged);
    const double rz = stability_value(z).real();
    CHECK(std::abs(s.y_next - rz) <= 1e-10 * std::abs(rz));
  }
}

TEST_CASE("the step end equals the last stage") {
  SolverConfig tight;
  tight.atol = tight.rtol = 1e-15;
  const ButcherTableau tab = radau_tableau();
  const ScalarOde ode = make_ode(get_case(3).equation);
  const double x = 0.3, y = 0.1, h = 0.2;
  const auto st = radau_step(ode, x, y, h, tab, tight);
  REQUIRE(st.converged);
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) sum += tab.A[2][j] * ode.f(x + tab.c[j] * h, y + st.Z[j]);
  CHECK(std::abs(st.y_next - (y + h * sum)) <= 1e-14);
}

TEST_CASE("one case-1 step agrees with the exact solution") {
  const auto st = step(make_ode(get_case(1).equation), 0.0, 0.0, 0.1, radau_tableau(), SolverConfig{});
  REQUIRE(st.converged);
  CHECK(std::abs(st.y_next - case1_exact(0.1)) <= 1e-7);
  CHECK(std::abs(st.y_refined - case1_exact(0.1)) <= 1e-7);
  const auto fine = integrate_fixed(make_ode(get_case(1).equation), 0.0, 0.0, 0.1, 1e-4, SolverConfig{});
  CHECK(std::abs(st.y_next - fine.final_y) <= 1e-7);
}

TEST_CASE("adaptive runs on the cases") {
  SolverConfig c;
  const auto r1 = integrate(get_case(1).equation, 0.0, 20.0, c);
  REQUIRE(r1.ok());
  CHECK(r1.final_x == 20.0);
  CHECK(std::abs(r1.final_y - (std::sqrt(2.0) - 1.0)) <= 1e-9);
  for (std::size_t i = 0; i < r1.xs.size(); i += 3) CHECK(std::abs(r1.ys[i] - case1_exact(r1.xs[i])) <= 1e-8);

  const auto r3 = integrate(get_case(3).equation, 0.0, 20.0, c);
  CHECK(r3.final_y == doctest::Approx(0.99999998).epsilon(1e-8));

  const auto r2 = integrate(get_case(2).equation, 0.0, 2000.0, c);
  CHECK(std::abs(r2.final_y - 0.38157) <= 5e-4);
  CHECK(r2.ys.front() == 0.0);
  for (std::size_t i = 1; i < r2.xs.size(); ++i) CHECK(r2.xs[i] > r2.xs[i - 1]);
}

TEST_CASE("Riccati equation against tanh") {
  const AbelEquation ric = testing_support::constant_equation({1.0, 0.0, -1.0});
  const auto r = integrate(ric, 0.0, 10.0, SolverConfig{});
  REQUIRE(r.ok());
  CHECK(std::abs(r.final_y - std::tanh(10.0)) <= 1e-9);
  for (std::size_t i = 0; i < r.xs.size(); ++i) CHECK(std::abs(r.ys[i] - std::tanh(r.xs[i])) <= 1e-8);
}

TEST_CASE("adaptive runs are deterministic and land on stops") {
  SolverConfig c;
  c.stops = {0.123, 5.0, 7.77, 25.0};
  const auto a = integrate(get_case(3).equation, 0.0, 20.0, c);
  const auto b = integrate(get_case(3).equation, 0.0, 20.0, c);
  CHECK(a.xs == b.xs);
  CHECK(a.ys == b.ys);
  for (double s : {0.123, 5.0, 7.77}) CHECK(std::find(a.xs.begin(), a.xs.end(), s) != a.xs.end());
  CHECK(a.xs.back() == 20.0);
  CHECK(a.y_at(5.0) == a.ys[static_cast<std::size_t>(std::find(a.xs.begin(), a.xs.end(), 5.0) - a.xs.begin())]);
}

TEST_CASE("failure statuses") {
  SolverConfig few;
  few.max_steps = 5;
  CHECK(integrate(get_case(1).equation, 0.0, 20.0, few).status == IntegrationStatus::MaxStepsExceeded);

  // y' = y^2 from y(0) = 1 blows up at x = 1.
  const auto blow = integrate(testing_support::constant_equation({0.0, 0.0, 1.0}), 1.0, 2.0, SolverConfig{});
  CHECK_FALSE(blow.ok());
  CHECK(blow.final_x < 1.0);
  CHECK(blow.final_x > 0.99);
}

TEST_CASE("solver configuration validation") {
  SolverConfig c;
  c.atol = 0.0;
  CHECK_THROWS_AS(c.validate(0.0, 1.0), Error);
  SolverConfig d;
  d.h0 = 1.0;
  d.h_max = 0.5;
  CHECK_THROWS_AS(d.validate(0.0, 10.0), Error);
  CHECK_THROWS_AS(SolverConfig{}.validate(1.0, 1.0), Error);
  CHECK_NOTHROW(SolverConfig{}.validate(0.0, 1.0));
}

TEST_CASE("empirical order") {
  const double hs[] = {0.2, 0.1, 0.05, 0.025};
  const OrderStudy c1 = empirical_order(get_case(1).equation, 0.0, 2.0, hs);
  CHECK(c1.observed_order >= 4.5);
  CHECK(c1.observed_order <= 5.5);
  CHECK(std::abs(c1.reference - case1_exact(2.0)) <= 1e-11);

  const double hl[] = {0.5, 0.25, 0.125, 0.0625};
  const OrderStudy lin = empirical_order(linear_ode(-2.0), 0.0, 1.0, 2.0, hl, std::exp(-4.0));
  CHECK(lin.observed_order == doctest::Approx(5.0).epsilon(0.05));

  const ScalarOde constant{[](double, double) { return 1.5; }, [](double, double) { return 0.0; }};
  const OrderStudy flat = empirical_order(constant, 0.0, 0.0, 2.0, hs, 3.0);
  for (double e : flat.errors) CHECK(e <= 1e-14);

  const double two[] = {0.1, 0.05};
  CHECK_THROWS_AS(empirical_order(get_case(1).equation, 0.0, 2.0, two), Error);
}
