#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "abel/cases.hpp"
#include "abel/error.hpp"
#include "abel/finance.hpp"
#include "abel/hypotheses.hpp"
#include "abel/io.hpp"
#include "abel/reduction.hpp"

namespace abel::cli {

namespace {

struct Tolerances {
  std::optional<double> atol;
  std::optional<double> rtol;

  void add_to(CLI::App* app) {
    app->add_option("--atol", atol, "absolute tolerance (default 1e-9)");
    app->add_option("--rtol", rtol, "relative tolerance (default 1e-9)");
  }
  void apply(SolverConfig& c) const {
    if (atol) c.atol = *atol;
    if (rtol) c.rtol = *rtol;
  }
};

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string e3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::filesystem::path prepare_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Config, "cannot write " + p.string());
  f << text;
}

template <class Writer>
void write_csv(const std::filesystem::path& p, Writer w) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Config, "cannot write " + p.string());
  w(f);
}

std::string gnuplot_script(bool with_branch) {
  std::string s =
      "set datafile separator ','\n"
      "set key autotitle columnhead\n"
      "set xlabel 'x'\n"
      "set ylabel 'y'\n"
      "plot 'trajectory.csv' using 1:2 with lines title 'y(x)'";
  if (with_branch) s += ", \\\n     'branch.csv' using 1:2 with lines dashtype 2 title 'E(x)'";
  return s + "\n";
}

void print_diagnostics(std::ostream& out, const PlateauDiagnostics& d) {
  out << "trapping_ok=" << yes_no(d.trapping_ok) << " monotone_ok=" << yes_no(d.monotone_ok)
      << " converged=" << yes_no(d.converged) << " max_violation=" << e3(d.max_violation) << '\n';
}

int verdict_exit(const HypothesisReport& r) { return r.plateau_hypotheses_hold() ? kExitOk : kExitHypothesis; }

// --- case ---------------------------------------------------------------

struct CaseArgs {
  int id = 0;
  std::optional<double> x_max;
  std::optional<std::string> out_dir;
  bool long_run = false;
  bool gnuplot = false;
  Tolerances tol;
};

int cmd_case(const CaseArgs& a, std::ostream& out) {
  const CaseStudy study = get_case(a.id);
  double x_max = a.x_max.value_or(study.default_x_end);
  if (a.long_run && !a.x_max && study.id == 2) x_max = 2e5;
  SolverConfig config;
  a.tol.apply(config);

  const CaseRun run = run_case(a.id, x_max, config);
  out << study.equation.description << '\n';
  out << "x_max=" << g9(x_max) << " y=" << fmt17(run.result.final_y) << " L=" << fmt17(study.exact_limit) << '\n';
  out << "L_numeric=" << g9(run.diagnostics.L_numeric) << ", gap=" << e3(run.gap) << '\n';
  out << "steps accepted=" << run.result.n_accepted << " rejected=" << run.result.n_rejected
      << " newton=" << run.result.n_newton_iters << " status=" << to_string(run.result.status) << '\n';
  print_diagnostics(out, run.diagnostics);
  for (const auto& row : study.reference_rows) {
    if (row.x_max == x_max) out << "reference y=" << g9(row.y_ref) << " gap=" << e3(row.gap_ref) << '\n';
  }
  out << run.hypotheses.table();

  if (a.out_dir) {
    const auto dir = prepare_dir(*a.out_dir);
    write_csv(dir / "trajectory.csv", [&](std::ostream& f) { write_trajectory_csv(f, run.result); });
    write_csv(dir / "branch.csv", [&](std::ostream& f) { write_branch_csv(f, run.branch); });
    write_file(dir / "report.json", case_report_json(run) + "\n");
    if (a.gnuplot) write_file(dir / "plot.gp", gnuplot_script(true));
  }
  if (!run.result.ok()) return kExitNumeric;
  return verdict_exit(run.hypotheses);
}

// --- integrate ----------------------------------------------------------

struct IntegrateArgs {
  std::string config_path;
  std::optional<std::string> out_dir;
  bool branch = false;
  bool hypotheses = false;
  bool gnuplot = false;
  Tolerances tol;
};

int cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  EquationConfig cfg = load_config(a.config_path);
  a.tol.apply(cfg.solver);
  const AbelEquation eq = cfg.equation();
  const IntegrationResult result = integrate(eq, cfg.y0, cfg.x_end, cfg.solver);
  out << "x_end=" << fmt17(result.final_x) << " y=" << fmt17(result.final_y) << '\n';
  out << "steps accepted=" << result.n_accepted << " rejected=" << result.n_rejected
      << " newton=" << result.n_newton_iters << " status=" << to_string(result.status) << '\n';

  std::optional<EquilibriumBranch> branch;
  std::optional<HypothesisReport> report;
  int code = result.ok() ? kExitOk : kExitNumeric;
  if (a.branch || a.hypotheses) {
    const NormalForm nf = normalize(eq);
    const GridSpec grid = cfg.hypothesis_grid();
    branch = branch_on_trajectory(nf, grid.x_start, cfg.x_end, grid.spacing, result.xs);
    print_diagnostics(out, diagnose(result, &*branch, cfg.solver));
    if (branch->L) out << "branch_limit=" << fmt17(*branch->L) << '\n';
    if (a.hypotheses) {
      report = verify(nf, grid);
      out << report->table();
      if (code == kExitOk) code = verdict_exit(*report);
    }
  }
  if (a.out_dir) {
    const auto dir = prepare_dir(*a.out_dir);
    write_csv(dir / "trajectory.csv", [&](std::ostream& f) { write_trajectory_csv(f, result); });
    if (branch) write_csv(dir / "branch.csv", [&](std::ostream& f) { write_branch_csv(f, *branch); });
    if (report) write_file(dir / "report.json", report_json(*report) + "\n");
    if (a.gnuplot) write_file(dir / "plot.gp", gnuplot_script(branch.has_value()));
  }
  return code;
}

// --- hypotheses ---------------------------------------------------------

struct HypothesesArgs {
  std::optional<int> case_id;
  std::optional<std::string> config_path;
  bool endpoint = false;
  bool negative = false;
  bool json = false;
};

int cmd_hypotheses(const HypothesesArgs& a, std::ostream& out) {
  const int sources = (a.case_id ? 1 : 0) + (a.config_path ? 1 : 0) + (a.negative ? 1 : 0);
  if (sources != 1) throw Error(ErrorCode::Config, "give exactly one of --case, --negative-example or a config file");
  if (a.endpoint && a.case_id != 2) throw Error(ErrorCode::Config, "--endpoint applies to case 2 only");

  HypothesisReport report;
  if (a.case_id) {
    const CaseStudy study = get_case(*a.case_id);
    report = verify(normalize(study.equation), a.endpoint ? case2_endpoint_grid() : study.hypothesis_grid);
  } else if (a.negative) {
    report = verify(normalize(negative_example()), negative_example_grid());
  } else {
    const EquationConfig cfg = load_config(*a.config_path);
    report = verify(normalize(cfg.equation()), cfg.hypothesis_grid());
  }
  out << (a.json ? report_json(report) + "\n" : report.table());
  return verdict_exit(report);
}

// --- reduce -------------------------------------------------------------

struct ReduceArgs {
  std::optional<int> case_id;
  std::optional<std::string> config_path;
  std::string ep;
  std::optional<double> x_end;
  std::size_t count = 11;
  bool roundtrip = false;
  std::optional<std::string> out_dir;
  Tolerances tol;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out) {
  if ((a.case_id ? 1 : 0) + (a.config_path ? 1 : 0) != 1) {
    throw Error(ErrorCode::Config, "give exactly one of --case or a config file");
  }
  AbelEquation eq;
  double y0 = 0.0;
  SolverConfig config;
  if (a.case_id) {
    eq = get_case(*a.case_id).equation;
  } else {
    const EquationConfig cfg = load_config(*a.config_path);
    eq = cfg.equation();
    y0 = cfg.y0;
    config = cfg.solver;
  }
  a.tol.apply(config);

  const Expr ep_expr = Expr::parse(a.ep);
  const ParticularSolution ep = ep_expr.is_constant()
                                    ? ParticularSolution::constant_root(ep_expr.eval(0.0))
                                    : ParticularSolution::explicit_solution([ep_expr](double x) { return ep_expr.eval(x); },
                                                                            ep_expr.to_string());
  const ReducedEquation red = reduce(eq, ep);

  const double x_end = a.x_end.value_or(eq.x0 + 5.0);
  const auto xs = make_grid({eq.x0, x_end, std::max<std::size_t>(2, a.count), GridSpacing::Linear});
  auto emit = [&](std::ostream& os) {
    os << 'x';
    for (int k = 1; k <= red.degree; ++k) os << ",c" << k;
    os << '\n';
    for (double x : xs) {
      os << fmt17(x);
      for (int k = 1; k <= red.degree; ++k) os << ',' << fmt17(red.c_at(k, x));
      os << '\n';
    }
  };
  emit(out);
  if (a.out_dir) write_csv(prepare_dir(*a.out_dir) / "reduced.csv", emit);

  if (a.roundtrip) {
    const RoundTrip rt = roundtrip_check(eq, ep, y0, x_end, config);
    out << "roundtrip_max_discrepancy=" << e3(rt.max_discrepancy) << '\n';
  }
  return kExitOk;
}

// --- spread -------------------------------------------------------------

struct SpreadArgs {
  bool literal = false;
  MertonParams params;
  std::optional<double> x0;
  double x_end = 20.0;
  std::optional<double> calibrate;
  std::optional<std::string> out_dir;
  bool gnuplot = false;
  Tolerances tol;
};

int cmd_spread(const SpreadArgs& a, std::ostream& out) {
  SolverConfig config;
  a.tol.apply(config);
  if (a.calibrate) {
    const CalibrationReport rep = case1_calibration_check(a.params, *a.calibrate, true);
    out << "calibration x_ref=" << g9(rep.x_ref) << " lambdas=(" << g9(rep.lambdas[0]) << ", " << g9(rep.lambdas[1])
        << ", " << g9(rep.lambdas[2]) << ") target=(1, -3, 1) max_deviation=" << g9(rep.max_deviation) << '\n';
    if (rep.eta2_solved) {
      const auto& l = *rep.lambdas_solved;
      out << "eta2_solved=" << g9(*rep.eta2_solved) << " lambdas=(" << g9(l[0]) << ", " << g9(l[1]) << ", "
          << g9(l[2]) << ") max_deviation=" << g9(*rep.max_deviation_solved) << '\n';
    }
  }

  const std::optional<MertonParams> params = a.literal ? std::nullopt : std::optional<MertonParams>(a.params);
  const double x0 = a.x0.value_or(a.literal ? kLiteralSpreadX0 : kParametricSpreadX0);
  const SpreadCurve curve = spread_curve(params, x0, a.x_end, config);
  out << "mode=" << (a.literal ? "literal-case1" : "parametric") << " x0=" << g9(x0) << " x_end=" << g9(a.x_end)
      << '\n';
  out << "s(x_end)=" << fmt17(curve.diagnostics.L_numeric) << " plateau_bp=" << g9(curve.plateau_bp) << '\n';
  print_diagnostics(out, curve.diagnostics);

  if (a.out_dir) {
    const auto dir = prepare_dir(*a.out_dir);
    write_csv(dir / "spread.csv", [&](std::ostream& f) {
      f << "x,s\n";
      for (std::size_t i = 0; i < curve.xs.size(); ++i) f << fmt17(curve.xs[i]) << ',' << fmt17(curve.s[i]) << '\n';
    });
    std::string meta = "{\n  \"mode\": \"" + std::string(a.literal ? "literal-case1" : "parametric") + "\"";
    if (!a.literal) {
      meta += ",\n  \"sigma0_sq\": " + fmt17(a.params.sigma0_sq) + ",\n  \"mu\": " + fmt17(a.params.mu) +
              ",\n  \"r\": " + fmt17(a.params.r) + ",\n  \"eta1\": " + fmt17(a.params.eta1) +
              ",\n  \"eta2\": " + fmt17(a.params.eta2);
    }
    meta += ",\n  \"x0\": " + fmt17(x0) + ",\n  \"x_end\": " + fmt17(a.x_end) +
            ",\n  \"plateau_bp\": " + fmt17(curve.plateau_bp) +
            ",\n  \"trapping_ok\": " + yes_no(curve.diagnostics.trapping_ok) +
            ",\n  \"monotone_ok\": " + yes_no(curve.diagnostics.monotone_ok) +
            ",\n  \"converged\": " + yes_no(curve.diagnostics.converged) + "\n}\n";
    write_file(dir / "spread.json", meta);
    if (a.gnuplot) {
      write_file(dir / "plot.gp",
                 "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\nset ylabel 's'\n"
                 "plot 'spread.csv' using 1:2 with lines title 's(x)'\n");
    }
  }
  return kExitOk;
}

// --- order-test ---------------------------------------------------------

struct OrderArgs {
  int case_id = 1;
  double x_end = 2.0;
  double h = 0.2;
  int levels = 4;
};

int cmd_order_test(const OrderArgs& a, std::ostream& out) {
  if (a.levels < 3) throw Error(ErrorCode::Config, "--levels must be at least 3");
  const CaseStudy study = get_case(a.case_id);
  std::vector<double> hs;
  for (int i = 0; i < a.levels; ++i) hs.push_back(a.h / std::pow(2.0, i));
  const OrderStudy os = empirical_order(study.equation, 0.0, a.x_end, hs);
  out << "h,error,ratio\n";
  for (std::size_t i = 0; i < os.hs.size(); ++i) {
    out << fmt17(os.hs[i]) << ',' << e3(os.errors[i]) << ',';
    out << (i == 0 ? std::string("") : g9(os.errors[i - 1] / os.errors[i])) << '\n';
  }
  out << "reference=" << fmt17(os.reference) << '\n';
  out << "observed_order=" << g9(os.observed_order) << '\n';
  return kExitOk;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::UnknownCase:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Syntax:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::UnbalancedParentheses:
    case ErrorCode::WrongDegree:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Abel equations: equilibrium branches, hypothesis checks, Radau IIA integration"};
  app.require_subcommand(1);

  CaseArgs ca;
  auto* c_case = app.add_subcommand("case", "run a built-in case study (1, 2 or 3)");
  c_case->add_option("id", ca.id, "case number")->required();
  c_case->add_option("--x-max", ca.x_max, "integration end point");
  c_case->add_option("--out", ca.out_dir, "directory for trajectory.csv, branch.csv, report.json");
  c_case->add_flag("--long-run", ca.long_run, "case 2: integrate to x = 2e5 unless --x-max is given");
  c_case->add_flag("--gnuplot", ca.gnuplot, "also write plot.gp");
  ca.tol.add_to(c_case);

  IntegrateArgs ia;
  auto* c_int = app.add_subcommand("integrate", "integrate an equation from a config file");
  c_int->add_option("config", ia.config_path, "equation config file")->required();
  c_int->add_option("--out", ia.out_dir, "output directory");
  c_int->add_flag("--branch", ia.branch, "continue the equilibrium branch and run diagnostics");
  c_int->add_flag("--hypotheses", ia.hypotheses, "verify the hypotheses on the config grid");
  c_int->add_flag("--gnuplot", ia.gnuplot, "also write plot.gp");
  ia.tol.add_to(c_int);

  HypothesesArgs ha;
  auto* c_hyp = app.add_subcommand("hypotheses", "grid-verify the structural and asymptotic hypotheses");
  c_hyp->add_option("config", ha.config_path, "equation config file");
  c_hyp->add_option("--case", ha.case_id, "built-in case number");
  c_hyp->add_flag("--endpoint", ha.endpoint, "case 2: start the grid at x = 1");
  c_hyp->add_flag("--negative-example", ha.negative, "the double-root example a0 = x/(x+1)");
  c_hyp->add_flag("--json", ha.json, "print JSON instead of a table");

  ReduceArgs ra;
  auto* c_red = app.add_subcommand("reduce", "reduce the degree about a particular solution");
  c_red->add_option("config", ra.config_path, "equation config file");
  c_red->add_option("--case", ra.case_id, "built-in case number");
  c_red->add_option("--ep", ra.ep, "particular solution, an expression in x")->required();
  c_red->add_option("--x-end", ra.x_end, "end of the output grid (default x0 + 5)");
  c_red->add_option("--count", ra.count, "number of grid points");
  c_red->add_flag("--roundtrip", ra.roundtrip, "integrate both forms and report the discrepancy");
  c_red->add_option("--out", ra.out_dir, "directory for reduced.csv");
  ra.tol.add_to(c_red);

  SpreadArgs sa;
  auto* c_spr = app.add_subcommand("spread", "credit-spread curve of the generalized Merton model");
  c_spr->add_flag("--literal-case1", sa.literal, "use the constant coefficients (1, -3, 1)");
  c_spr->add_option("--sigma0-sq", sa.params.sigma0_sq, "variance scale");
  c_spr->add_option("--mu", sa.params.mu, "drift");
  c_spr->add_option("--r", sa.params.r, "risk-free rate");
  c_spr->add_option("--eta1", sa.params.eta1, "linear volatility shape");
  c_spr->add_option("--eta2", sa.params.eta2, "quadratic volatility shape");
  c_spr->add_option("--x0", sa.x0, "start of the leverage range");
  c_spr->add_option("--x-end", sa.x_end, "end of the leverage range");
  c_spr->add_option("--calibrate", sa.calibrate, "report the Case-1 calibration at this x");
  c_spr->add_option("--out", sa.out_dir, "directory for spread.csv and spread.json");
  c_spr->add_flag("--gnuplot", sa.gnuplot, "also write plot.gp");
  sa.tol.add_to(c_spr);

  OrderArgs oa;
  auto* c_ord = app.add_subcommand("order-test", "fixed-step convergence order study");
  c_ord->add_option("--case", oa.case_id, "built-in case number");
  c_ord->add_option("--x-end", oa.x_end, "end point");
  c_ord->add_option("--h-max", oa.h, "largest step (default 0.2)");
  c_ord->add_option("--levels", oa.levels, "number of step sizes, each half the previous");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_case->parsed()) return cmd_case(ca, out);
    if (c_int->parsed()) return cmd_integrate(ia, out);
    if (c_hyp->parsed()) return cmd_hypotheses(ha, out);
    if (c_red->parsed()) return cmd_reduce(ra, out);
    if (c_spr->parsed()) return cmd_spread(sa, out);
    if (c_ord->parsed()) return cmd_order_test(oa, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace abel::cli
