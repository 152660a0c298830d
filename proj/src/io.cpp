#include "abel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "abel/error.hpp"

namespace abel {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const IntegrationResult& r) {
  os << "x,y,h_used,newton_iters\n";
  for (std::size_t i = 0; i < r.xs.size(); ++i) {
    os << fmt17(r.xs[i]) << ',' << fmt17(r.ys[i]) << ',' << fmt17(r.h_used[i]) << ',' << r.newton_iters_per_step[i]
       << '\n';
  }
}

void write_branch_csv(std::ostream& os, const EquilibriumBranch& b) {
  os << "x,E,Lambda,E_prime\n";
  for (const auto& p : b.points) {
    os << fmt17(p.x) << ',' << fmt17(p.E) << ',' << fmt17(p.Lambda) << ',' << fmt17(p.E_prime) << '\n';
  }
}

namespace {

// JSON has no inf/nan; those become strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt17(v);
}

json to_json(const HypothesisReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json w = json::object();
    auto put = [&](const char* k, const std::optional<double>& v) {
      if (v) w[k] = num(*v);
    };
    put("m", e.witness.m);
    put("alpha0", e.witness.alpha0);
    put("L", e.witness.L);
    put("B3_integral", e.witness.B3_integral);
    put("worst_x", e.witness.worst_x);
    put("worst_value", e.witness.worst_value);
    entries.push_back({{"id", e.id}, {"status", to_string(e.status)}, {"witness", w}, {"note", e.note}});
  }
  json j = {{"entries", entries}, {"notes", r.notes}};
  if (r.grid_spec) {
    j["grid"] = {{"x_start", num(r.grid_spec->x_start)},
                 {"x_end", num(r.grid_spec->x_end)},
                 {"count", r.grid_spec->count},
                 {"spacing", r.grid_spec->spacing == GridSpacing::Log ? "log" : "linear"}};
  }
  return j;
}

}  // namespace

std::string report_json(const HypothesisReport& r) { return to_json(r).dump(2); }

std::string case_report_json(const CaseRun& run) {
  const auto& res = run.result;
  const auto& d = run.diagnostics;
  json j = {
      {"case", run.study.id},
      {"x0", num(run.study.x0)},
      {"x_max", num(res.final_x)},
      {"y_final", num(res.final_y)},
      {"exact_limit", num(run.study.exact_limit)},
      {"gap", num(run.gap)},
      {"status", to_string(res.status)},
      {"n_accepted", res.n_accepted},
      {"n_rejected", res.n_rejected},
      {"n_newton_iters", res.n_newton_iters},
      {"diagnostics",
       {{"L_numeric", num(d.L_numeric)},
        {"converged", d.converged},
        {"trapping_ok", d.trapping_ok},
        {"monotone_ok", d.monotone_ok},
        {"max_violation", num(d.max_violation)}}},
      {"hypotheses", to_json(run.hypotheses)},
  };
  if (run.branch.L) j["branch_limit"] = num(*run.branch.L);
  if (run.rate) {
    j["rate"] = {{"C_R", num(run.rate->C_R)},
                 {"sup_E", num(run.rate->sup_E)},
                 {"B3_integral", num(run.rate->B3_integral)},
                 {"remainder_dominant", run.rate->remainder_dominant},
                 {"final_bound", num(run.rate->bound.back())}};
  }
  return j.dump(2);
}

AbelEquation EquationConfig::equation() const {
  if (degree < 1) throw Error(ErrorCode::Config, "degree must be at least 1");
  if (coefficients.size() != static_cast<std::size_t>(degree) + 1) {
    throw Error(ErrorCode::Config, "degree " + std::to_string(degree) + " needs " + std::to_string(degree + 1) +
                                       " coefficients, got " + std::to_string(coefficients.size()));
  }
  AbelEquation eq;
  eq.degree = degree;
  eq.x0 = x0;
  eq.description = "configured equation";
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    try {
      eq.coeffs.push_back(CoefficientFn::from_string("a" + std::to_string(k), coefficients[k], domain_start));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "coefficient a" + std::to_string(k) + ": " + e.what());
    }
  }
  return eq;
}

GridSpec EquationConfig::hypothesis_grid() const {
  return {grid_start.value_or(x0), grid_end.value_or(x_end), grid_count.value_or(401), grid_spacing};
}

namespace {

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

EquationConfig parse_config(std::string_view text) {
  EquationConfig cfg;
  bool have_degree = false, have_coeffs = false, have_x_end = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": " + why);
    };
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    json v;
    try {
      v = json::parse(value);
    } catch (const json::parse_error&) {
      fail("cannot parse value for '" + key + "'");
    }
    auto number = [&]() -> double {
      if (!v.is_number()) fail("'" + key + "' must be a number");
      return v.get<double>();
    };
    auto count = [&]() -> long long {
      if (!v.is_number_integer() || v.get<long long>() < 1) fail("'" + key + "' must be a positive integer");
      return v.get<long long>();
    };

    if (key == "degree") {
      if (!v.is_number_integer()) fail("'degree' must be an integer");
      cfg.degree = v.get<int>();
      have_degree = true;
    } else if (key == "coefficients") {
      if (!v.is_array()) fail("'coefficients' must be a list");
      cfg.coefficients.clear();
      for (const auto& item : v) {
        if (item.is_string()) {
          cfg.coefficients.push_back(item.get<std::string>());
        } else if (item.is_number()) {
          cfg.coefficients.push_back(fmt17(item.get<double>()));
        } else {
          fail("coefficients must be strings or numbers");
        }
      }
      have_coeffs = true;
    } else if (key == "x0") {
      cfg.x0 = number();
    } else if (key == "y0") {
      cfg.y0 = number();
    } else if (key == "x_end") {
      cfg.x_end = number();
      have_x_end = true;
    } else if (key == "domain_start") {
      cfg.domain_start = number();
    } else if (key == "atol") {
      cfg.solver.atol = number();
    } else if (key == "rtol") {
      cfg.solver.rtol = number();
    } else if (key == "h0") {
      cfg.solver.h0 = number();
    } else if (key == "h_min") {
      cfg.solver.h_min = number();
    } else if (key == "h_max") {
      cfg.solver.h_max = number();
    } else if (key == "newton_tol") {
      cfg.solver.newton_tol = number();
    } else if (key == "newton_max_iters") {
      cfg.solver.newton_max_iters = static_cast<int>(count());
    } else if (key == "max_steps") {
      cfg.solver.max_steps = static_cast<std::size_t>(count());
    } else if (key == "grid_start") {
      cfg.grid_start = number();
    } else if (key == "grid_end") {
      cfg.grid_end = number();
    } else if (key == "grid_count") {
      cfg.grid_count = static_cast<std::size_t>(count());
    } else if (key == "grid_spacing") {
      if (v == "linear") {
        cfg.grid_spacing = GridSpacing::Linear;
      } else if (v == "log") {
        cfg.grid_spacing = GridSpacing::Log;
      } else {
        fail("grid_spacing must be \"linear\" or \"log\"");
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!have_degree) throw Error(ErrorCode::Config, "missing 'degree'");
  if (!have_coeffs) throw Error(ErrorCode::Config, "missing 'coefficients'");
  if (!have_x_end) throw Error(ErrorCode::Config, "missing 'x_end'");
  cfg.equation();
  try {
    cfg.solver.validate(cfg.x0, cfg.x_end);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  return cfg;
}

EquationConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Config, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace abel
