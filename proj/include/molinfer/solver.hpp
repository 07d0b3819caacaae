#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "molinfer/decode.hpp"
#include "molinfer/milp.hpp"
#include "molinfer/subprocess.hpp"

namespace molinfer {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// External solver invocation: binary plus an argument template where {lp}
// and {sol} expand to the problem and solution file paths.
struct SolverConfig {
  std::string binary;
  std::vector<std::string> args{"{lp}", "{sol}", "{limit}"};
  double time_limit_seconds = 120.0;
  std::string dialect = "generic";  // generic | cbc

  static SolverConfig from_environment(const std::string& fallback_shim) {
    SolverConfig c;
    if (const char* env = std::getenv("MOLINFER_SOLVER")) {
      c.binary = env;
    } else {
      c.binary = "python3";
      c.args = {fallback_shim, "{lp}", "{sol}", "{limit}"};
    }
    return c;
  }
};

namespace solverdetail {

inline bool numeric_token(const std::string& t) {
  if (t.empty()) return false;
  char* end = nullptr;
  std::strtod(t.c_str(), &end);
  return end && *end == '\0';
}

}  // namespace solverdetail

// Parses a solution file.  The generic dialect accepts an optional leading
// status line plus `name value` rows; the cbc dialect additionally skips a
// leading row index and trailing reduced-cost column.
inline Assignment parse_solution_text(const std::string& text, const std::string& dialect) {
  Assignment a;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (first) {
      first = false;
      std::string low;
      for (char c : line) low += char(std::tolower(static_cast<unsigned char>(c)));
      if (low.find("infeasible") != std::string::npos) {
        a.status = SolveStatus::Infeasible;
        continue;
      }
      if (low.find("optimal") != std::string::npos) {
        a.status = SolveStatus::Optimal;
        continue;
      }
      if (low.find("timeout") != std::string::npos || low.find("time limit") != std::string::npos ||
          low.rfind("status", 0) == 0) {
        if (low.find("feasible") != std::string::npos) a.status = SolveStatus::Feasible;
        else if (low.find("timeout") != std::string::npos) a.status = SolveStatus::Timeout;
        else if (low.find("unbounded") != std::string::npos) a.status = SolveStatus::Unknown;
        else a.status = SolveStatus::Unknown;
        continue;
      }
      // no status header: fall through and treat as a value row
    }
    if (dialect == "cbc") {
      // "index name value reduced-cost"
      if (tok.size() >= 3 && solverdetail::numeric_token(tok[0]) &&
          solverdetail::numeric_token(tok[2])) {
        a.values[tok[1]] = std::atof(tok[2].c_str());
        continue;
      }
    }
    if (tok.size() >= 2 && !solverdetail::numeric_token(tok[0]) &&
        solverdetail::numeric_token(tok[1])) {
      a.values[tok[0]] = std::atof(tok[1].c_str());
    } else if (tok.size() >= 3 && solverdetail::numeric_token(tok[0]) &&
               !solverdetail::numeric_token(tok[1]) && solverdetail::numeric_token(tok[2])) {
      a.values[tok[1]] = std::atof(tok[2].c_str());
    }
  }
  if (a.status == SolveStatus::Unknown && !a.values.empty()) a.status = SolveStatus::Feasible;
  return a;
}

// Largest absolute constraint violation of an assignment against a model.
inline double max_violation(const MilpModel& m, const Assignment& a) {
  double worst = 0;
  for (const auto& c : m.cons()) {
    double lhs = 0;
    for (const auto& t : c.terms) lhs += double(t.coef) * a.value(m.vars()[size_t(t.var)].name);
    double viol = 0;
    if (c.rel == 0) viol = std::fabs(lhs - double(c.rhs));
    else if (c.rel < 0) viol = std::max(0.0, lhs - double(c.rhs));
    else viol = std::max(0.0, double(c.rhs) - lhs);
    worst = std::max(worst, viol);
  }
  for (const auto& v : m.vars()) {
    double x = a.value(v.name);
    worst = std::max(worst, std::max(double(v.lb) - x, x - double(v.ub)));
  }
  return worst;
}

// Runs the configured solver on an LP file and parses the produced solution.
// When the originating model is supplied, feasible assignments are re-checked
// against every constraint before being accepted.
inline Assignment solve_lp(const std::string& lp_path, const SolverConfig& config,
                           const MilpModel* model = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::exists(lp_path)) throw SolverError("lp file does not exist: " + lp_path);
  std::string sol_path = lp_path + ".sol";
  std::error_code ec;
  fs::remove(sol_path, ec);
  std::vector<std::string> argv{config.binary};
  for (std::string arg : config.args) {
    size_t p;
    while ((p = arg.find("{lp}")) != std::string::npos) arg.replace(p, 4, lp_path);
    while ((p = arg.find("{sol}")) != std::string::npos) arg.replace(p, 5, sol_path);
    while ((p = arg.find("{limit}")) != std::string::npos)
      arg.replace(p, 7, std::to_string(config.time_limit_seconds));
    argv.push_back(arg);
  }
  SubprocessResult r = run_subprocess(argv, config.time_limit_seconds);
  if (r.timed_out) {
    Assignment a;
    a.status = SolveStatus::Timeout;
    // a best incumbent may still have been written before the kill
    if (fs::exists(sol_path)) {
      std::ifstream in(sol_path);
      std::ostringstream os;
      os << in.rdbuf();
      Assignment parsed = parse_solution_text(os.str(), config.dialect);
      if (!parsed.values.empty()) {
        a.values = parsed.values;
        a.status = SolveStatus::Timeout;
      }
    }
    return a;
  }
  if (r.exit_code == 127)
    throw SolverError("solver binary not found: " + config.binary);
  if (!fs::exists(sol_path)) {
    std::string excerpt = r.output.substr(0, 800);
    throw SolverError("solver produced no solution file; output:\n" + excerpt);
  }
  std::ifstream in(sol_path);
  std::ostringstream os;
  os << in.rdbuf();
  Assignment a = parse_solution_text(os.str(), config.dialect);
  a.raw_excerpt = r.output.substr(0, 800);
  if (a.status == SolveStatus::Unknown && a.values.empty())
    throw SolverError("could not parse solver output; excerpt:\n" + os.str().substr(0, 800));
  if (model && a.solution_available()) {
    double viol = max_violation(*model, a);
    if (viol > 1e-6)
      throw SolverError("solver answer violates the model by " + std::to_string(viol));
  }
  return a;
}

}  // namespace molinfer
