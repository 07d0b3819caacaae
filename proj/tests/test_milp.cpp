#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "molinfer/milp_build.hpp"
#include "molinfer/solver.hpp"

using namespace molinfer;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(MOLINFER_SOURCE_DIR) + "/tests/fixtures/" + name;
}

SolverConfig shim_config(double limit = 200) {
  SolverConfig c;
  c.binary = "python3";
  c.args = {std::string(MOLINFER_SOURCE_DIR) + "/tools/milp_solve.py", "{lp}", "{sol}",
            "{limit}"};
  c.time_limit_seconds = limit;
  return c;
}

TargetSpec tiny_monocyclic(std::vector<std::string> lambda = {"C"}, int n_star = 8,
                           int cs_lb = 3, int cs_ub = 6) {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, cs_ub - 1}}, {"a2", {1, cs_ub - 1}}};
  doc["core"]["cs"] = {cs_lb, cs_ub};
  doc["noncore"]["n"] = {cs_lb, n_star};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = lambda;
  json side = json::array();
  side.push_back({{"terms", {{{"coef", 1}, {"kind", "ell"}, {"edge", "a1"}},
                             {{"coef", -1}, {"kind", "ell"}, {"edge", "a2"}}}},
                  {"op", "<="},
                  {"rhs", 0}});
  doc["side"] = side;
  return parse_spec(doc);
}

// minimal LP parser (test oracle): reads back the emitted text and exposes
// the constraint matrix
struct ParsedLp {
  std::map<std::string, std::pair<double, double>> bounds;
  struct Row {
    std::map<std::string, double> terms;
    int rel = 0;
    double rhs = 0;
  };
  std::map<std::string, Row> rows;
  std::map<std::string, double> objective;
};

ParsedLp parse_lp_text(const std::string& text) {
  ParsedLp lp;
  std::istringstream in(text);
  std::string line, section;
  auto parse_terms = [](const std::string& body, std::map<std::string, double>& out, int* rel,
                        double* rhs) {
    std::istringstream ls(body);
    std::string tok;
    double sign = 1, coef = 1;
    bool have_coef = false;
    while (ls >> tok) {
      if (tok == "+") { sign = 1; coef = 1; have_coef = false; continue; }
      if (tok == "-") { sign = -1; coef = 1; have_coef = false; continue; }
      if (tok == "<=" || tok == ">=" || tok == "=") {
        if (rel) *rel = tok == "<=" ? -1 : tok == ">=" ? 1 : 0;
        if (rhs) ls >> *rhs;
        return;
      }
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end && *end == '\0') {
        coef = v;
        have_coef = true;
      } else {
        out[tok] += sign * (have_coef ? coef : 1);
        sign = 1;
        coef = 1;
        have_coef = false;
      }
    }
  };
  while (std::getline(in, line)) {
    std::string t = line;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    if (t.empty()) continue;
    std::string low;
    for (char c : t) low += char(std::tolower(static_cast<unsigned char>(c)));
    if (low == "minimize" || low == "subject to" || low == "bounds" || low == "generals" ||
        low == "binaries" || low == "end") {
      section = low;
      continue;
    }
    if (section == "minimize") {
      auto body = t.substr(t.find(':') + 1);
      parse_terms(body, lp.objective, nullptr, nullptr);
    } else if (section == "subject to") {
      auto name = t.substr(0, t.find(':'));
      auto body = t.substr(t.find(':') + 1);
      ParsedLp::Row row;
      parse_terms(body, row.terms, &row.rel, &row.rhs);
      lp.rows[name] = row;
    } else if (section == "bounds") {
      std::istringstream ls(t);
      std::vector<std::string> tok;
      std::string x;
      while (ls >> x) tok.push_back(x);
      if (tok.size() == 3 && tok[1] == "=")
        lp.bounds[tok[0]] = {std::stod(tok[2]), std::stod(tok[2])};
      else if (tok.size() == 5)
        lp.bounds[tok[2]] = {std::stod(tok[0]), std::stod(tok[4])};
    } else if (section == "binaries") {
      std::istringstream ls(t);
      std::string x;
      while (ls >> x) lp.bounds.emplace(x, std::make_pair(0.0, 1.0));
    }
  }
  return lp;
}

}  // namespace

TEST_CASE("hand model emits the golden LP file") {
  MilpModel m;
  int x = m.add_var("x", 0, 1, "demo");
  int y = m.add_var("y", 0, 3, "demo");
  int z = m.add_var("z", 1, 2, "demo");
  m.add_con("demo", {{x, 1}, {y, 2}}, -1, 3);
  m.add_con("demo", {{y, 1}, {z, -1}}, 0, 0);
  m.add_con("demo", {{x, 1}, {z, 1}}, 1, 1);
  std::string got = m.lp_string();
  std::ifstream in(fixture_path("hand_model.lp"));
  REQUIRE(in.good());
  std::ostringstream want;
  want << in.rdbuf();
  CHECK(got == want.str());
}

TEST_CASE("lp writer round-trips through an independent parser") {
  auto spec = tiny_monocyclic();
  auto bm = build_model(spec);
  auto lp = parse_lp_text(bm.model.lp_string());
  CHECK(lp.rows.size() == bm.model.cons().size());
  for (const auto& c : bm.model.cons()) {
    REQUIRE(lp.rows.count(c.name));
    const auto& row = lp.rows.at(c.name);
    CHECK(row.rel == c.rel);
    CHECK(row.rhs == doctest::Approx(double(c.rhs)));
    std::map<std::string, double> want;
    for (const auto& t : c.terms) want[bm.model.vars()[size_t(t.var)].name] += double(t.coef);
    for (auto& [name, coef] : row.terms)
      if (name != "zero_var") CHECK(coef == doctest::Approx(want.count(name) ? want[name] : 0));
    for (auto& [name, coef] : want)
      CHECK(doctest::Approx(coef) == (row.terms.count(name) ? row.terms.at(name) : 0));
  }
  for (const auto& v : bm.model.vars()) {
    REQUIRE(lp.bounds.count(v.name));
    CHECK(lp.bounds.at(v.name).first == doctest::Approx(double(v.lb)));
    CHECK(lp.bounds.at(v.name).second == doctest::Approx(double(v.ub)));
  }
}

TEST_CASE("model build is deterministic") {
  auto spec = tiny_monocyclic({"C", "O"});
  auto a = build_model(spec);
  auto b = build_model(spec);
  CHECK(a.model.lp_string() == b.model.lp_string());
  CHECK(a.model.stats() == b.model.stats());
}

TEST_CASE("variable and constraint counts grow monotonically with n*") {
  size_t prev_vars = 0, prev_cons = 0;
  for (int nstar : {6, 12, 24}) {
    auto spec = tiny_monocyclic({"C"}, nstar, 3, std::min(nstar - 1, 10));
    auto bm = build_model(spec);
    CHECK(bm.model.vars().size() > prev_vars);
    CHECK(bm.model.cons().size() > prev_cons);
    prev_vars = bm.model.vars().size();
    prev_cons = bm.model.cons().size();
  }
}

TEST_CASE("scheme parameters are monotone in cs_UB") {
  int prev = -1;
  for (int cs_ub = 4; cs_ub <= 8; ++cs_ub) {
    auto spec = tiny_monocyclic({"C"}, 10, 3, cs_ub);
    auto p = scheme_parameters(spec);
    CHECK(p.tT >= prev);
    prev = p.tT;
  }
}

TEST_CASE("model family stats cover the expected families") {
  auto spec = tiny_monocyclic();
  auto bm = build_model(spec);
  auto stats = bm.model.stats();
  for (const char* fam : {"A1_core", "A2_internal", "A3_fringe", "A4_degree", "A5_multiplicity",
                          "A6_element_valence", "A7_bond_bounds", "AC", "CS", "EC", "SPEC_link"})
    CHECK(stats.contains(fam));
}

TEST_CASE("tables fixture model builds") {
  std::ifstream in(fixture_path("tables_spec.json"));
  std::ostringstream os;
  os << in.rdbuf();
  auto spec = parse_spec_text(os.str());
  auto bm = build_model(spec);
  CHECK(bm.model.vars().size() > 1000);
  CHECK(bm.model.cons().size() > 1000);
  CHECK(bm.P.dmax == 4);
  CHECK(bm.P.tT == 28 - 12);
}

TEST_CASE("monocyclic solve round trip" * doctest::timeout(600)) {
  auto spec = tiny_monocyclic({"C", "O"}, 8, 3, 6);
  auto bm = build_model(spec);
  std::string lp = "/tmp/molinfer_test_mono.lp";
  std::ofstream(lp) << bm.model.lp_string();
  auto a = solve_lp(lp, shim_config(), &bm.model);
  REQUIRE(a.solution_available());
  auto d = decode_and_verify(bm, spec, a);
  CHECK(d.report.pass);
  CHECK(d.features.cs >= 3);
  CHECK(d.features.cs <= 6);
  auto dec = rho_decompose(d.graph, 2);
  CHECK(dec.lean);
}

TEST_CASE("restricting core configurations to single bonds holds in the decode" *
          doctest::timeout(600)) {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, 5}}, {"a2", {1, 5}}};
  doc["core"]["cs"] = {3, 6};
  doc["noncore"]["n"] = {3, 8};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = {"C"};
  doc["chem"]["ldg_co"] = {"C2", "C3"};
  doc["chem"]["gamma_co"] = {{"C2", "C2", 1}, {"C2", "C3", 1}, {"C3", "C3", 1}};
  auto spec = parse_spec(doc);
  auto bm = build_model(spec);
  std::string lp = "/tmp/molinfer_test_single.lp";
  std::ofstream(lp) << bm.model.lp_string();
  auto a = solve_lp(lp, shim_config(), &bm.model);
  REQUIRE(a.solution_available());
  auto d = decode_and_verify(bm, spec, a);
  for (const auto& e : d.graph.core_edges) CHECK(e.beta == 1);
}

TEST_CASE("pin mode reproduces the pinned features" * doctest::timeout(600)) {
  auto spec = tiny_monocyclic({"C", "O"}, 8, 3, 6);
  auto bm = build_model(spec);
  std::string lp = "/tmp/molinfer_test_pin_a.lp";
  std::ofstream(lp) << bm.model.lp_string();
  auto a = solve_lp(lp, shim_config(), &bm.model);
  REQUIRE(a.solution_available());
  auto first = decode_and_verify(bm, spec, a);

  TargetMode mode;
  mode.pin = true;
  mode.x_star = first.features;
  auto bm2 = build_model(spec, mode);
  std::string lp2 = "/tmp/molinfer_test_pin_b.lp";
  std::ofstream(lp2) << bm2.model.lp_string();
  auto a2 = solve_lp(lp2, shim_config(), &bm2.model);
  REQUIRE(a2.solution_available());
  auto second = decode_and_verify(bm2, spec, a2);
  CHECK(second.features == first.features);
}

TEST_CASE("unreachable size bound is infeasible" * doctest::timeout(600)) {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, 3}}, {"a2", {1, 3}}};
  doc["core"]["cs"] = {3, 4};
  doc["noncore"]["n"] = {20, 20};
  doc["noncore"]["rho"] = 2;
  doc["noncore"]["ch_v"] = {{"u1", {0, 0}}, {"u2", {0, 0}}};
  doc["noncore"]["ch_e"] = {{"a1", {0, 0}}, {"a2", {0, 0}}};
  doc["chem"]["lambda"] = {"C"};
  auto spec = parse_spec(doc);
  auto bm = build_model(spec);
  std::string lp = "/tmp/molinfer_test_infeas.lp";
  std::ofstream(lp) << bm.model.lp_string();
  auto a = solve_lp(lp, shim_config(), &bm.model);
  CHECK(a.status == SolveStatus::Infeasible);
}
