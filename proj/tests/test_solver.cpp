#include <fstream>

#include "doctest.h"
#include "molinfer/milp.hpp"
#include "molinfer/solver.hpp"

using namespace molinfer;

namespace {

SolverConfig shim_config() {
  SolverConfig c;
  c.binary = "python3";
  c.args = {std::string(MOLINFER_SOURCE_DIR) + "/tools/milp_solve.py", "{lp}", "{sol}",
            "{limit}"};
  c.time_limit_seconds = 60;
  return c;
}

std::string write_lp(const std::string& name, const std::string& body) {
  std::string path = "/tmp/" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("feasible toy program" * doctest::timeout(120)) {
  std::string lp = write_lp("solver_feasible.lp",
                            "Minimize\n obj: 0 zero_var\n"
                            "Subject To\n c0: + x + y >= 1\n"
                            "Bounds\n zero_var = 0\n"
                            "Binaries\n x\n y\nEnd\n");
  auto a = solve_lp(lp, shim_config());
  REQUIRE(a.solution_available());
  CHECK(a.value("x") + a.value("y") >= 1 - 1e-9);
}

TEST_CASE("contradictory bounds are infeasible" * doctest::timeout(120)) {
  std::string lp = write_lp("solver_infeasible.lp",
                            "Minimize\n obj: 0 zero_var\n"
                            "Subject To\n c0: + x >= 2\n c1: + x <= 1\n"
                            "Bounds\n zero_var = 0\n 0 <= x <= 5\n"
                            "Generals\n x\nEnd\n");
  auto a = solve_lp(lp, shim_config());
  CHECK(a.status == SolveStatus::Infeasible);
}

TEST_CASE("generic solution dialect parses") {
  auto a = parse_solution_text("status optimal\nx 1\ny 0\nn_G 12\n", "generic");
  CHECK(a.status == SolveStatus::Optimal);
  CHECK(a.value("x") == 1);
  CHECK(a.value("n_G") == 12);
  CHECK(a.value("unlisted") == 0);  // sparse convention
}

TEST_CASE("cbc solution dialect parses the golden fixture") {
  // captured from a CBC run on the toy program above
  std::string text =
      "Optimal - objective value 0.00000000\n"
      "      0 x                      1                       0\n"
      "      1 y                      0                       0\n";
  auto a = parse_solution_text(text, "cbc");
  CHECK(a.status == SolveStatus::Optimal);
  CHECK(a.value("x") == 1);
  CHECK(a.value("y") == 0);
}

TEST_CASE("infeasible status header wins over value rows") {
  auto a = parse_solution_text("Infeasible - objective value 0\n", "cbc");
  CHECK(a.status == SolveStatus::Infeasible);
}

TEST_CASE("assignments are re-checked against the model") {
  MilpModel m;
  int x = m.add_var("x", 0, 5, "demo");
  m.add_con("demo", {{x, 1}}, 1, 2);  // x >= 2
  Assignment good;
  good.status = SolveStatus::Optimal;
  good.values["x"] = 2;
  CHECK(max_violation(m, good) <= 1e-9);
  Assignment bad = good;
  bad.values["x"] = 1;
  CHECK(max_violation(m, bad) >= 1 - 1e-9);
}

TEST_CASE("missing binary errors out") {
  SolverConfig c;
  c.binary = "/nonexistent/solver";
  c.args = {"{lp}", "{sol}"};
  std::string lp = write_lp("solver_missing.lp", "Minimize\n obj: 0 zero_var\nEnd\n");
  CHECK_THROWS_AS(solve_lp(lp, c), SolverError);
}
