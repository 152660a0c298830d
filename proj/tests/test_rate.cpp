#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "abel/cases.hpp"
#include "abel/error.hpp"
#include "abel/hypotheses.hpp"
#include "abel/rate.hpp"
#include "helpers.hpp"

using namespace abel;

namespace {

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("fundamental solution") {
  const NormalForm nf1 = normalize(get_case(1).equation);
  const auto b1 = continue_branch(nf1, GridSpec{0.0, 5.0, 51, GridSpacing::Linear});
  CHECK(phi(nf1, b1, 0.0) == 1.0);
  CHECK(phi(nf1, b1, 1.0) == doctest::Approx(std::exp(4.0 - 4.0 * std::sqrt(2.0))).epsilon(1e-13));
  CHECK(phi(nf1, b1, 2.345) == doctest::Approx(std::exp((4.0 - 4.0 * std::sqrt(2.0)) * 2.345)).epsilon(1e-13));
  CHECK_THROWS_AS(phi(nf1, b1, 6.0), Error);

  // Case 3: Lambda tends to -1, so log Phi^-1 grows with unit slope.
  const NormalForm nf3 = normalize(get_case(3).equation);
  const auto b3 = continue_branch(nf3, GridSpec{0.0, 30.0, 601, GridSpacing::Linear});
  const FundamentalSolution fs(nf3, b3);
  CHECK((fs.log_phi(20.0) - fs.log_phi(30.0)) / 10.0 == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t i = 1; i < b3.points.size(); ++i) CHECK(fs.log_phi(b3.points[i].x) < fs.log_phi(b3.points[i - 1].x));
}

TEST_CASE("fundamental solution is multiplicative") {
  const NormalForm nf = normalize(get_case(3).equation);
  const auto full = continue_branch(nf, GridSpec{0.0, 10.0, 201, GridSpacing::Linear});
  EquilibriumBranch tail;
  tail.points.assign(full.points.begin() + 60, full.points.end());  // from x = 3
  const double x1 = 3.0, x2 = 8.0;
  const double whole = phi(nf, full, x2);
  const double split = phi(nf, full, x1) * phi(nf, tail, x2);
  CHECK(std::abs(whole - split) <= 1e-10 * whole);
}

TEST_CASE("remainder constant") {
  const NormalForm nf1 = normalize(get_case(1).equation);
  const auto b1 = continue_branch(nf1, GridSpec{0.0, 5.0, 11, GridSpacing::Linear});
  const double E = std::sqrt(2.0) - 1.0;
  CHECK(remainder_constant(nf1, b1) == doctest::Approx((3.0 * std::sqrt(2.0) - 2.0) + E).epsilon(1e-14));

  const NormalForm lin = normalize(testing_support::constant_equation({1.0, -1.0}));
  CHECK(remainder_constant(lin, continue_branch(lin, GridSpec{0.0, 1.0, 3, GridSpacing::Linear})) == 0.0);

  const NormalForm nf3 = normalize(get_case(3).equation);
  const auto b3 = continue_branch(nf3, GridSpec{0.0, 20.0, 401, GridSpacing::Linear});
  CHECK(remainder_constant(nf3, b3) == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("rate bound dominates the deviation for cases 1 and 3") {
  const SolverConfig c;
  for (int id : {1, 3}) {
    const CaseRun run = run_case(id, 20.0, c);
    REQUIRE(run.rate);
    const RateBound& rb = *run.rate;
    REQUIRE(rb.xs == run.result.xs);
    CHECK(rb.Phi.front() == 1.0);
    CHECK(rb.bound.front() == doctest::Approx(run.branch.E_at(run.study.x0)).epsilon(1e-15));
    for (std::size_t i = 0; i < rb.xs.size(); ++i) {
      CHECK(rb.Phi[i] > 0.0);
      if (i > 0) CHECK(rb.Phi[i] <= rb.Phi[i - 1]);
      CHECK(rb.bound[i] >= std::abs(run.result.ys[i] - run.branch.E_at(rb.xs[i])));
    }
  }
}

TEST_CASE("case 3 bound decays at unit rate") {
  const CaseRun run = run_case(3, 20.0, SolverConfig{});
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < run.rate->xs.size(); ++i) {
    if (run.rate->xs[i] >= 10.0) {
      xs.push_back(run.rate->xs[i]);
      ls.push_back(std::log(run.rate->bound[i]));
    }
  }
  REQUIRE(xs.size() >= 3);
  CHECK(slope(xs, ls) == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("rate bound needs a covering branch") {
  const CaseRun run = run_case(2, 20.0, SolverConfig{});
  CHECK_FALSE(run.rate.has_value());
  const NormalForm nf = normalize(get_case(2).equation);
  CHECK_THROWS_AS(rate_bound(nf, run.branch, run.result), Error);
}

TEST_CASE("plateau diagnostics") {
  const SolverConfig c;
  const CaseRun one = run_case(1, 20.0, c);
  CHECK(one.diagnostics.trapping_ok);
  CHECK(one.diagnostics.monotone_ok);
  CHECK(one.diagnostics.converged);
  CHECK(one.diagnostics.L_numeric == doctest::Approx(0.41421356).epsilon(1e-8));

  const CaseRun two = run_case(2, 20.0, c);
  CHECK_FALSE(two.diagnostics.converged);
  CHECK(std::abs(two.diagnostics.L_numeric - two.study.exact_limit) == doctest::Approx(1.6e-2).epsilon(0.1));

  const AbelEquation zero = testing_support::constant_equation({0.0, 0.0, 0.0, 1.0});
  auto flat = integrate(zero, 0.0, 10.0, c);
  for (double y : flat.ys) CHECK(y == 0.0);
  CHECK(diagnose(flat, nullptr, c).monotone_ok);

  // A decreasing trajectory violates monotonicity.
  IntegrationResult down;
  down.xs = {0.0, 1.0, 2.0};
  down.ys = {1.0, 0.5, 0.25};
  const auto d = diagnose(down, nullptr, c);
  CHECK_FALSE(d.monotone_ok);
  CHECK(d.max_violation == 0.5);
}

TEST_CASE("comparison principle on random cubics") {
  // F = (y - r1)(y - r2)(y - r3) + eps exp(-x) with 0 < r1 < r2 and r3 < 0; the
  // smallest positive root is the stable branch. Constant 0 and sup E bound y.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 80 && checked < 50; ++trial) {
    const double r1 = 0.2 + u(rng), r2 = r1 + 0.3 + u(rng), r3 = -0.2 - 2.0 * u(rng);
    const double eps = 0.1 * r1 * u(rng);
    const double a2 = -(r1 + r2 + r3), a1 = r1 * r2 + r1 * r3 + r2 * r3, a0 = -r1 * r2 * r3;
    AbelEquation eq;
    eq.degree = 3;
    eq.coeffs = {CoefficientFn::from_callable("a0", [a0, eps](double x) { return a0 + eps * std::exp(-x); }, "a0"),
                 CoefficientFn::constant("a1", a1), CoefficientFn::constant("a2", a2), CoefficientFn::constant("a3", 1.0)};
    const NormalForm nf = normalize(eq);
    const GridSpec grid{0.0, 15.0, 301, GridSpacing::Linear};
    const HypothesisReport rep = verify(nf, grid);
    if (!rep.plateau_hypotheses_hold() || rep.find("A4")->status != Verdict::Pass) continue;
    ++checked;
    const SolverConfig c;
    const auto res = integrate(eq, 0.0, 15.0, c);
    REQUIRE(res.ok());
    const auto branch = continue_branch(nf, grid);
    const double sup = branch.sup_E();
    for (double y : res.ys) {
      const double tol = 10.0 * (c.atol + c.rtol * std::abs(y));
      CHECK(y >= -tol);
      CHECK(y <= sup + tol);
    }
  }
  CHECK(checked == 50);
}
