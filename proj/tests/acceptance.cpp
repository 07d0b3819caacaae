// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "molinfer/check.hpp"
#include "molinfer/isomer_pipeline.hpp"
#include "molinfer/milp_build.hpp"
#include "molinfer/proper_set.hpp"
#include "molinfer/solver.hpp"

using namespace molinfer;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

std::string fixture(const std::string& name) {
  return std::string(MOLINFER_SOURCE_DIR) + "/tests/fixtures/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SolverConfig shim(double limit) {
  SolverConfig c;
  c.binary = "python3";
  c.args = {std::string(MOLINFER_SOURCE_DIR) + "/tools/milp_solve.py", "{lp}", "{sol}",
            "{limit}"};
  c.time_limit_seconds = limit;
  return c;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<char> prune_oracle(const ChemicalGraph& g) {
  auto adj = g.adjacency();
  std::vector<int> deg = g.degrees();
  std::vector<char> alive(size_t(g.n()), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.n(); ++v)
      if (alive[size_t(v)] && deg[size_t(v)] <= 1) {
        alive[size_t(v)] = 0;
        changed = true;
        for (auto [w, b] : adj[size_t(v)])
          if (alive[size_t(w)]) deg[size_t(w)]--;
      }
  }
  return alive;
}

// ---------------------------------------------------------------- criterion 1
void criterion1() {
  ElementTable t = ElementTable::builtin();
  std::mt19937 rng(2024);
  std::vector<int> elems{t.id("C"), t.id("N"), t.id("O")};
  auto t0 = Clock::now();
  int checked = 0;
  bool ok = true;
  std::string detail;
  while (checked < 500) {
    auto g = testutil::random_cyclic(rng, t, 12, elems);
    auto a = observed_alphabet(g, 2, t);
    auto f = feature_vector(g, 2, a, t);
    // definitional recount
    auto core = prune_oracle(g);
    auto deg = g.degrees();
    FeatureVector want;
    want.n = g.n();
    for (char c : core) want.cs += c;
    // heights via explicit recursion
    std::function<int(int, int)> down = [&](int v, int p) -> int {
      int h = 0;
      for (auto [w, b] : g.adjacency()[size_t(v)])
        if (w != p && !core[size_t(w)]) h = std::max(h, 1 + down(w, v));
      return h;
    };
    auto adj = g.adjacency();
    std::function<int(int, int)> down2 = [&](int v, int p) -> int {
      int h = 0;
      for (auto [w, b] : adj[size_t(v)])
        if (w != p && !core[size_t(w)]) h = std::max(h, 1 + down2(w, v));
      return h;
    };
    for (int v = 0; v < g.n(); ++v)
      if (core[size_t(v)])
        for (auto [w, b] : adj[size_t(v)])
          if (!core[size_t(w)]) want.ch = std::max(want.ch, 1 + down2(w, v));
    // bl: non-core vertices with pendant height exactly rho below a parent
    std::vector<int> parent(size_t(g.n()), -2);
    std::vector<int> order;
    for (int v = 0; v < g.n(); ++v)
      if (core[size_t(v)]) parent[size_t(v)] = -1;
    std::vector<int> frontier;
    for (int v = 0; v < g.n(); ++v)
      if (core[size_t(v)]) frontier.push_back(v);
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int v : frontier)
        for (auto [w, b] : adj[size_t(v)])
          if (parent[size_t(w)] == -2) {
            parent[size_t(w)] = v;
            order.push_back(w);
            next.push_back(w);
          }
      frontier = std::move(next);
    }
    for (int v : order)
      if (down2(v, parent[size_t(v)]) == 2) want.bl++;
    std::int64_t mass = 0;
    for (int v = 0; v < g.n(); ++v) mass += t.mass_star(g.alpha[size_t(v)]);
    want.ms_bar = Rational(mass, want.n);
    for (int v = 0; v < g.n(); ++v) {
      ChemSym s{g.alpha[size_t(v)], deg[size_t(v)]};
      if (core[size_t(v)]) { want.dg_co[size_t(deg[size_t(v)] - 1)]++; want.ns_co[s]++; }
      else { want.dg_nc[size_t(deg[size_t(v)] - 1)]++; want.ns_nc[s]++; }
    }
    // edge classification: internal iff a branch lies in the head subtree
    std::function<bool(int)> has_branch = [&](int v) -> bool {
      if (down2(v, parent[size_t(v)]) == 2) return true;
      for (auto [w, b] : adj[size_t(v)])
        if (parent[size_t(w)] == v && has_branch(w)) return true;
      return false;
    };
    int val_sum = 0, beta_sum = 0;
    for (int v = 0; v < g.n(); ++v) val_sum += t.valence(g.alpha[size_t(v)]);
    for (auto& e : g.core_edges) {
      beta_sum += e.beta;
      EdgeConfig c = edge_config(g, t, e.u, e.v, e.beta, true, deg);
      want.ec_co[c]++;
      if (e.beta >= 2) want.bd_co[size_t(e.beta - 2)]++;
    }
    for (auto& e : g.noncore_edges) {
      beta_sum += e.beta;
      EdgeConfig c = edge_config(g, t, e.u, e.v, e.beta, false, deg);
      if (has_branch(e.v)) {
        want.ec_in[c]++;
        if (e.beta >= 2) want.bd_in[size_t(e.beta - 2)]++;
      } else {
        want.ec_ex[c]++;
        if (e.beta >= 2) want.bd_ex[size_t(e.beta - 2)]++;
      }
    }
    want.ns_h = val_sum - 2 * beta_sum;
    if (!(f == want)) {
      ok = false;
      detail = "mismatch on instance " + std::to_string(checked);
      break;
    }
    ++checked;
  }
  double secs = seconds_since(t0);
  if (secs >= 10 && ok) {
    ok = false;
    detail = "runtime " + std::to_string(secs) + "s";
  }
  report(1, "descriptor oracle equivalence on 500 random graphs", ok,
         detail.empty() ? std::to_string(secs) + "s" : detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
  bool ok = true;
  std::string detail;
  try {
    auto spec = parse_spec_text(slurp(fixture("tables_spec.json")));
    if (spec.core.cs.lb != 20 || spec.core.cs.ub != 28 || spec.noncore.n_star != 50 ||
        spec.noncore.rho != 2)
      throw std::runtime_error("tables fixture bounds");
    ElementTable t = spec.chem.table;
    auto g = read_graph_file(fixture("fig6_core.graph"), t);
    auto rep = check_extension(g, spec);
    if (!rep.sigma_co_pass || rep.cs != 22) throw std::runtime_error("fig6 sigma_co clauses");
    auto h1 = testutil::h1_core(t.id("C"));
    if (core_of(h1).cs != 17) throw std::runtime_error("h1 core size");
    if (rank_of(h1) != 2) throw std::runtime_error("h1 rank");
    using P = std::set<std::pair<int, int>>;
    auto as_set = [](std::vector<std::pair<int, int>> v) { return P(v.begin(), v.end()); };
    if (as_set(proper_set(1, 2, 2)) != P{{0, 1}, {1, 2}, {2, 3}})
      throw std::runtime_error("proper set (1,2,2)");
    if (as_set(proper_set(2, 2, 2)) !=
        P{{0, 1}, {1, 2}, {1, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 6}, {5, 6}})
      throw std::runtime_error("proper set (2,2,2)");
    if (as_set(proper_set(2, 3, 2)) != P{{0, 1}, {1, 2}, {1, 3}, {2, 6}, {3, 4}, {3, 6}, {4, 5},
                                         {4, 7}, {5, 8}, {6, 7}, {7, 8}})
      throw std::runtime_error("proper set (2,3,2)");
    if (as_set(proper_set(3, 3, 2)) !=
        P{{0, 1}, {1, 2}, {1, 4}, {2, 3}, {2, 7}, {3, 10}, {4, 5}, {4, 7}, {5, 6}, {5, 8},
          {6, 9}, {7, 8}, {7, 10}, {8, 9}, {8, 11}, {9, 12}, {10, 11}, {11, 12}})
      throw std::runtime_error("proper set (3,3,2)");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(2, "paper fixtures (tables spec, worked extension, core, proper sets)", ok, detail);
}

// ---------------------------------------------------------------- criterion 3
TargetSpec monocyclic_co_spec() {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, 7}}, {"a2", {1, 7}}};
  doc["core"]["cs"] = {3, 8};
  doc["noncore"]["n"] = {3, 10};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = {"C", "O"};
  json side = json::array();
  side.push_back({{"terms", {{{"coef", 1}, {"kind", "ell"}, {"edge", "a1"}},
                             {{"coef", -1}, {"kind", "ell"}, {"edge", "a2"}}}},
                  {"op", "<="},
                  {"rhs", 0}});
  doc["side"] = side;
  return parse_spec(doc);
}

void criterion3() {
  bool ok = true;
  std::string detail;
  auto t0 = Clock::now();
  try {
    auto spec = monocyclic_co_spec();
    auto bm = build_model(spec);
    std::string lp = "/tmp/acceptance_mono.lp";
    std::ofstream(lp) << bm.model.lp_string();
    auto a = solve_lp(lp, shim(110), &bm.model);
    if (!a.solution_available()) throw std::runtime_error("expected feasible");
    auto d = decode_and_verify(bm, spec, a);  // throws unless features match exactly
    if (!d.report.pass) throw std::runtime_error("check_extension failed");
    if (seconds_since(t0) >= 120) throw std::runtime_error("over 120 s");
    // infeasible variant: no core configuration is allowed to appear
    json doc = spec_to_json(spec);
    json zero = json::object();
    for (auto& g : doc["chem"]["gamma_co"])
      zero[g[0].get<std::string>() + " " + g[1].get<std::string>() + " " +
           std::to_string(g[2].get<int>())] = {0, 0};
    doc["chem"]["ec_co"] = zero;
    auto spec2 = parse_spec(doc);
    auto bm2 = build_model(spec2);
    std::string lp2 = "/tmp/acceptance_mono_inf.lp";
    std::ofstream(lp2) << bm2.model.lp_string();
    auto a2 = solve_lp(lp2, shim(110), &bm2.model);
    if (a2.status != SolveStatus::Infeasible) throw std::runtime_error("expected infeasible");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(3, "feasibility round trip on the monocyclic seed", ok,
         detail.empty() ? std::to_string(seconds_since(t0)) + "s" : detail);
}

// ---------------------------------------------------------------- criterion 4
TargetSpec desk_spec() {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, 5}}, {"a2", {1, 5}}};
  doc["core"]["cs"] = {3, 6};
  doc["noncore"]["n"] = {3, 7};
  doc["noncore"]["rho"] = 2;
  doc["noncore"]["ch_v"] = {{"u1", {0, 2}}, {"u2", {0, 2}}};
  doc["noncore"]["ch_e"] = {{"a1", {0, 2}}, {"a2", {0, 2}}};
  doc["chem"]["lambda"] = {"C"};
  doc["chem"]["ldg_co"] = {"C2", "C3", "C4"};
  doc["chem"]["ldg_nc"] = {"C1", "C2", "C3"};
  doc["chem"]["gamma_co"] = {{"C2", "C2", 1}, {"C2", "C3", 1}, {"C2", "C4", 1},
                             {"C3", "C3", 1}, {"C3", "C4", 1}, {"C4", "C4", 1}};
  doc["chem"]["gamma_ex"] = {{"C2", "C1", 1}, {"C3", "C1", 1}, {"C4", "C1", 1},
                             {"C2", "C2", 1}, {"C3", "C2", 1}, {"C4", "C2", 1},
                             {"C2", "C3", 1}, {"C3", "C3", 1}, {"C4", "C3", 1}};
  doc["chem"]["gamma_in"] = json::array();
  json side = json::array();
  side.push_back({{"terms", {{{"coef", 1}, {"kind", "ell"}, {"edge", "a1"}},
                             {{"coef", -1}, {"kind", "ell"}, {"edge", "a2"}}}},
                  {"op", "<="},
                  {"rhs", 0}});
  doc["side"] = side;
  return parse_spec(doc);
}

// all decorated cycles over one element with single bonds, de-duplicated
std::set<std::string> brute_force_extensions(const TargetSpec& spec) {
  const ElementTable& t = spec.chem.table;
  int C = t.id("C");
  // pendant decorations: rooted trees at a core vertex, height <= 2,
  // every non-root vertex of degree <= 3, root children <= 2
  std::vector<RootedTree> decos;
  {
    // tree shapes up to 5 vertices via monotone parent arrays
    for (int n = 1; n <= 5; ++n) {
      std::vector<int> parent(static_cast<size_t>(n), -1);
      std::function<void(int)> rec = [&](int i) {
        if (i == n) {
          RootedTree tree;
          for (int v = 0; v < n; ++v)
            tree.nodes.push_back(RootedTree::Node{C, parent[size_t(v)], v == 0 ? 0 : 1});
          if (tree.heights()[0] > 2) return;
          decos.push_back(tree);
          return;
        }
        for (int p = std::max(parent[size_t(i - 1)], 0); p < i; ++p) {
          parent[size_t(i)] = p;
          rec(i + 1);
        }
      };
      if (n == 1) {
        RootedTree tree;
        tree.nodes.push_back(RootedTree::Node{C, -1, 0});
        decos.push_back(tree);
      } else {
        rec(1);
      }
    }
  }
  std::set<std::string> found;
  for (int L = 3; L <= 6; ++L) {
    // assign a decoration to every cycle position with total size <= n*
    std::vector<size_t> pick(static_cast<size_t>(L), 0);
    std::function<void(int, int)> rec = [&](int pos, int total) {
      if (total > spec.noncore.n_star) return;
      if (pos == L) {
        ChemicalGraph g;
        for (int i = 0; i < L; ++i) g.add_vertex(C);
        for (int i = 0; i < L; ++i) g.add_core_edge(i, (i + 1) % L, 1);
        for (int i = 0; i < L; ++i) {
          const RootedTree& d = decos[pick[size_t(i)]];
          std::vector<int> map(static_cast<size_t>(d.n()), -1);
          map[0] = i;
          for (int j = 1; j < d.n(); ++j) {
            map[size_t(j)] = g.add_vertex(C);
            g.add_noncore_edge(map[size_t(d.nodes[size_t(j)].parent)], map[size_t(j)], 1);
          }
        }
        try {
          g.validate(t);
        } catch (...) {
          return;
        }
        if (!check_extension(g, spec).pass) return;
        found.insert(canonical_code(g));
        return;
      }
      for (size_t c = 0; c < decos.size(); ++c) {
        pick[size_t(pos)] = c;
        rec(pos + 1, total + decos[c].n() - 1);
      }
    };
    rec(0, L);
  }
  return found;
}

void criterion4() {
  bool ok = true;
  std::string detail;
  auto t0 = Clock::now();
  try {
    auto spec = desk_spec();
    auto brute = brute_force_extensions(spec);
    // MILP enumeration with no-good cuts until infeasible
    auto bm = build_model(spec);
    std::set<std::string> milp_found;
    int rounds = 0;
    while (true) {
      std::string lp = "/tmp/acceptance_desk_" + std::to_string(rounds) + ".lp";
      std::ofstream(lp) << bm.model.lp_string();
      auto a = solve_lp(lp, shim(120), &bm.model);
      if (!a.solution_available()) break;
      auto d = decode_and_verify(bm, spec, a);
      milp_found.insert(canonical_code(d.graph));
      std::vector<LinTerm> cut;
      long long ones = 0;
      for (size_t vi = 0; vi < bm.model.vars().size(); ++vi) {
        const auto& v = bm.model.vars()[vi];
        if (!v.binary) continue;
        if (std::llround(a.value(v.name)) >= 1) {
          cut.push_back({int(vi), -1});
          ++ones;
        } else {
          cut.push_back({int(vi), 1});
        }
      }
      bm.model.add_con("SPEC_link", cut, 1, 1 - ones);
      ++rounds;
      if (seconds_since(t0) > 1700) throw std::runtime_error("over 30 minutes");
    }
    if (milp_found != brute)
      throw std::runtime_error("count mismatch: milp " + std::to_string(milp_found.size()) +
                               " vs brute force " + std::to_string(brute.size()));
    detail = std::to_string(brute.size()) + " graphs, " + std::to_string(rounds) + " solves, " +
             std::to_string(int(seconds_since(t0))) + "s";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(4, "desk-scale completeness against brute force", ok, detail);
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
  bool ok = true;
  std::string detail;
  try {
    ElementTable t = ElementTable::builtin();
    json doc;
    doc["seed"]["vertices"] = 2;
    doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                            {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
    doc["core"]["ell"] = {{"a1", {2, 7}}, {"a2", {1, 7}}};
    doc["core"]["cs"] = {3, 8};
    doc["noncore"]["n"] = {3, 20};
    doc["noncore"]["rho"] = 2;
    doc["chem"]["lambda"] = {"C", "N", "O"};
    auto spec = parse_spec(doc);
    std::mt19937 rng(77);
    std::vector<int> elems{t.id("C"), t.id("N"), t.id("O")};
    int accepted = 0, outputs = 0;
    while (accepted < 50) {
      auto g = testutil::random_cyclic(rng, t, 20, elems);
      auto d = rho_decompose(g, 2);
      if (!d.lean) continue;
      if (!check_extension(g, spec).pass) continue;
      IsomerOptions opt;
      opt.dp.sample_cap = -1;
      opt.limit = 400;
      auto res = generate_isomers(g, spec, opt);
      auto fref = graph_frequency_vector(g, 2, t);
      auto f0 = feature_vector(g, 2, observed_alphabet(g, 2, t), t);
      auto core_of_graph = [&](const ChemicalGraph& x) {
        auto dd = rho_decompose(x, 2);
        ChemicalGraph core;
        std::map<int, int> remap;
        for (int v = 0; v < x.n(); ++v)
          if (dd.is_core[size_t(v)]) remap[v] = core.add_vertex(x.alpha[size_t(v)]);
        for (auto& e : x.core_edges) core.add_core_edge(remap[e.u], remap[e.v], e.beta);
        return core;
      };
      auto core_in = core_of_graph(g);
      std::string self = canonical_code(g);
      bool self_found = false;
      for (const auto& out : res.graphs) {
        if (!(graph_frequency_vector(out, 2, t) == fref))
          throw std::runtime_error("frequency mismatch");
        if (!(feature_vector(out, 2, observed_alphabet(out, 2, t), t) == f0))
          throw std::runtime_error("feature mismatch");
        if (!graphs_isomorphic(core_of_graph(out), core_in))
          throw std::runtime_error("core not isomorphic");
        if (canonical_code(out) == self) self_found = true;
        ++outputs;
      }
      bool limited = opt.limit >= 0 && (long long)res.graphs.size() >= opt.limit;
      if (!self_found && !limited) throw std::runtime_error("input graph missing from outputs");
      ++accepted;
    }
    detail = std::to_string(outputs) + " outputs over 50 seeds";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, "isomorphism contract on 50 seeded inputs", ok, detail);
}

// ---------------------------------------------------------------- criterion 6
// exhaustive oracle machinery: enumerate every target e-component directly
std::vector<RootedTree> oracle_pendants(const ElementTable& t, const std::vector<int>& elems,
                                        int nmax) {
  std::vector<RootedTree> out;
  std::set<std::string> seen;
  for (int n = 1; n <= nmax; ++n) {
    std::vector<std::vector<int>> shapes;
    std::vector<int> parent(static_cast<size_t>(n), -1);
    if (n == 1) {
      shapes.push_back(parent);
    } else {
      std::function<void(int)> rec = [&](int i) {
        if (i == n) {
          shapes.push_back(parent);
          return;
        }
        for (int q = std::max(parent[size_t(i - 1)], 0); q < i; ++q) {
          parent[size_t(i)] = q;
          rec(i + 1);
        }
      };
      rec(1);
    }
    for (const auto& par : shapes) {
      std::vector<int> elem(static_cast<size_t>(n), 0), beta(static_cast<size_t>(n), 0);
      std::function<void(int)> assign = [&](int i) {
        if (i == n) {
          RootedTree tree;
          for (int v = 0; v < n; ++v)
            tree.nodes.push_back(
                RootedTree::Node{elem[size_t(v)], par[size_t(v)], v == 0 ? 0 : beta[size_t(v)]});
          auto bs = tree.beta_sums();
          for (int v = 0; v < n; ++v)
            if (bs[size_t(v)] > t.valence(tree.nodes[size_t(v)].elem)) return;
          if (tree.heights()[0] > 2) return;
          ChemicalGraph g = tree.to_graph_all_noncore();
          g.alpha[0] += 1000;
          if (seen.insert(canonical_code(g)).second) out.push_back(tree);
          return;
        }
        for (int ee : elems) {
          elem[size_t(i)] = ee;
          if (i == 0) {
            assign(1);
            continue;
          }
          for (int b = 1; b <= 3; ++b) {
            beta[size_t(i)] = b;
            assign(i + 1);
          }
        }
      };
      assign(0);
    }
  }
  return out;
}

std::set<std::string> exhaustive_components(const TargetSpec& spec, const EdgeCode& code,
                                            const std::vector<RootedTree>& pendants,
                                            Bounds ch_e) {
  const ElementTable& t = spec.chem.table;
  std::set<std::string> distinct;
  int interior = code.ell - 1;
  std::vector<int> elems = spec.chem.lambda;
  // the component's exact vertex count follows from the budget: one vertex
  // per edge plus the root end
  int total_edges = 0;
  std::set<int> comults;
  for (auto& [k, v] : code.x.entries)
    if (k.strat != Strat::Tbc) {
      total_edges += v;
      if (k.strat == Strat::Co) comults.insert(k.cfg.mult);
    }
  int total_n = total_edges + 1;

  std::function<void(int, ChemicalGraph&, std::vector<int>&)> fill =
      [&](int pos, ChemicalGraph& comp, std::vector<int>& backbone) {
        if (pos == interior) {
          if (comp.n() != total_n) return;
          RootedTree tree;
          std::map<int, int> remap{{0, 0}};
          tree.nodes.push_back(RootedTree::Node{comp.alpha[0], -1, 0});
          std::vector<int> frontier{0};
          auto adj = comp.adjacency();
          std::vector<char> vis(static_cast<size_t>(comp.n()), 0);
          vis[0] = 1;
          while (!frontier.empty()) {
            std::vector<int> next;
            for (int u : frontier)
              for (auto [w, b] : adj[size_t(u)])
                if (!vis[size_t(w)]) {
                  vis[size_t(w)] = 1;
                  tree.nodes.push_back(RootedTree::Node{comp.alpha[size_t(w)], remap[u], b});
                  remap[w] = int(tree.nodes.size()) - 1;
                  next.push_back(w);
                }
            frontier = std::move(next);
          }
          tree.nc = false;
          tree.r2 = remap[backbone.back()];
          FrequencyVector w;
          try {
            w = tree_frequency_vector(tree, 2, t, code.end[0].delta, code.end[1].delta);
          } catch (const std::invalid_argument&) {
            return;
          }
          if (!(w == code.x)) return;
          // height range of the component
          {
            auto bb = tree.backbone_mask();
            auto hs = tree.heights();
            int h = 0;
            for (int v = 0; v < tree.n(); ++v)
              if (bb[size_t(v)])
                for (int u = 1; u < tree.n(); ++u)
                  if (tree.nodes[size_t(u)].parent == v && !bb[size_t(u)])
                    h = std::max(h, hs[size_t(u)] + 1);
            if (h < ch_e.lb || h > ch_e.ub) return;
          }
          ChemicalGraph m1 = comp;
          m1.alpha[size_t(backbone.front())] += 1000;
          m1.alpha[size_t(backbone.back())] += 2000;
          ChemicalGraph m2 = comp;
          m2.alpha[size_t(backbone.front())] += 2000;
          m2.alpha[size_t(backbone.back())] += 1000;
          std::string k1 = canonical_code(m1), k2 = canonical_code(m2);
          bool ends_equal = code.end[0].elem == code.end[1].elem &&
                            code.end[0].mult == code.end[1].mult &&
                            code.end[0].delta == code.end[1].delta;
          distinct.insert(ends_equal ? std::min(k1, k2) : k1);
          return;
        }
        int v = backbone[size_t(pos + 1)];
        for (const auto& pend : pendants) {
          if (pend.nodes[0].elem != comp.alpha[size_t(v)]) continue;
          if (comp.n() + pend.n() - 1 > total_n) continue;
          ChemicalGraph next = comp;
          std::vector<int> remap(static_cast<size_t>(pend.n()), -1);
          remap[0] = v;
          for (int j = 1; j < pend.n(); ++j) {
            remap[size_t(j)] = next.add_vertex(pend.nodes[size_t(j)].elem);
            next.add_noncore_edge(remap[size_t(pend.nodes[size_t(j)].parent)], remap[size_t(j)],
                                  pend.nodes[size_t(j)].beta);
          }
          fill(pos + 1, next, backbone);
        }
      };
  std::function<void(int, ChemicalGraph&, std::vector<int>&)> spine =
      [&](int pos, ChemicalGraph& comp, std::vector<int>& backbone) {
        if (pos == code.ell + 1) {
          fill(0, comp, backbone);
          return;
        }
        bool last = pos == code.ell;
        std::vector<int> choice = last ? std::vector<int>{code.end[1].elem} : elems;
        for (int e : choice) {
          std::vector<int> mults;
          if (pos == 1 && code.ell == 1) {
            if (code.end[0].mult != code.end[1].mult) continue;
            mults = {code.end[0].mult};
          } else if (pos == 1) {
            mults = {code.end[0].mult};
          } else if (last) {
            mults = {code.end[1].mult};
          } else {
            mults = {1, 2, 3};
          }
          for (int m : mults) {
            ChemicalGraph next = comp;
            int v = next.add_vertex(e);
            next.add_core_edge(backbone.back(), v, m);
            backbone.push_back(v);
            spine(pos + 1, next, backbone);
            backbone.pop_back();
          }
        }
      };
  ChemicalGraph start;
  start.add_vertex(code.end[0].elem);
  std::vector<int> backbone{0};
  spine(1, start, backbone);
  return distinct;
}

void criterion6() {
  bool ok = true;
  std::string detail;
  try {
    ElementTable t = ElementTable::builtin();
    int C = t.id("C"), O = t.id("O");
    json doc;
    doc["seed"]["vertices"] = 2;
    doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                            {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
    doc["core"]["ell"] = {{"a1", {2, 7}}, {"a2", {1, 7}}};
    doc["core"]["cs"] = {3, 8};
    doc["noncore"]["n"] = {3, 14};
    doc["noncore"]["rho"] = 2;
    doc["chem"]["lambda"] = {"C", "O"};
    auto spec = parse_spec(doc);
    auto pendants = oracle_pendants(t, {C, O}, 5);

    // several toy inputs with differently shaped edge components
    std::vector<ChemicalGraph> toys;
    {
      auto g = testutil::cycle_graph(6, C);
      int o = g.add_vertex(O);
      g.add_noncore_edge(0, o, 1);
      int c1 = g.add_vertex(C);
      g.add_noncore_edge(3, c1, 1);
      int c2 = g.add_vertex(C);
      g.add_noncore_edge(c1, c2, 2);
      toys.push_back(g);
    }
    {
      auto g = testutil::cycle_graph(5, C);
      g.alpha[2] = O;
      int c1 = g.add_vertex(C);
      g.add_noncore_edge(1, c1, 1);
      int c2 = g.add_vertex(O);
      g.add_noncore_edge(4, c2, 1);
      toys.push_back(g);
    }
    long long edges_checked = 0;
    for (auto& g : toys) {
      g.rho = 2;
      auto rep = check_extension(g, spec);
      if (!rep.pass) throw std::runtime_error("toy input rejected");
      auto partition = choose_path_partition(g, spec, rep);
      auto dec = decompose(g, partition, 2, t);
      DpOptions full;
      full.sample_cap = -1;
      DpOptions capped;
      capped.sample_cap = 1;
      for (const auto& code : dec.ecodes) {
        auto run_bound = [&](const DpOptions& dpo) {
          DpRun run(spec.chem, 2, 3, code.x, partition.ch_e[size_t(code.path)], dpo);
          run.run_steps_1_to_3();
          int d1 = (code.ell - 1) / 2, d2 = code.ell - 1 - d1;
          auto s1 = step4_side(run, code.end[0], d1, partition.ch_e[size_t(code.path)]);
          auto s2 = step4_side(run, code.end[1], d2, partition.ch_e[size_t(code.path)]);
          bool inter = d1 == d2 && code.end[0].elem == code.end[1].elem &&
                       code.end[0].mult == code.end[1].mult &&
                       code.end[0].delta == code.end[1].delta;
          auto pairs = step5_pairs(run, code, s1, s2, partition.ch_e[size_t(code.path)], inter);
          // merge must equal the quadratic all-pairs oracle
          using Sig = std::tuple<FrequencyVector, FrequencyVector, EdgeConfig, int>;
          std::vector<Sig> got, want;
          for (const auto& pr : pairs) got.push_back({pr.w1, pr.w2, pr.gamma, pr.mult});
          for (const auto& [k1, set1] : s1.sets)
            for (const auto& [k2, set2] : s2.sets) {
              bool bare1 = s1.delta_q == 0, bare2 = s2.delta_q == 0;
              ChemSym sym1 = bare1 ? ChemSym{code.end[0].elem, 1 + code.end[0].delta}
                                   : ChemSym{k1.elem, k1.d + 1};
              ChemSym sym2 = bare2 ? ChemSym{code.end[1].elem, 1 + code.end[1].delta}
                                   : ChemSym{k2.elem, k2.d + 1};
              int mcap = std::min(bare1 ? 3 : t.valence(k1.elem) - k1.m,
                                  bare2 ? 3 : t.valence(k2.elem) - k2.m);
              for (int mm = 1; mm <= std::min(3, mcap); ++mm) {
                if (bare1 && mm != code.end[0].mult) continue;
                if (bare2 && mm != code.end[1].mult) continue;
                int h = std::max(k1.h, k2.h);
                if (h < partition.ch_e[size_t(code.path)].lb ||
                    h > partition.ch_e[size_t(code.path)].ub)
                  continue;
                EdgeConfig gamma = normalized(t, {sym1, sym2, mm});
                for (const auto& [w1, e1] : set1.entries)
                  for (const auto& [w2, e2] : set2.entries) {
                    FrequencyVector sum = w1 + w2;
                    sum.add(key_co(gamma), 1);
                    if (!(sum == code.x)) continue;
                    if (inter && (k2 < k1 || (k1 == k2 && w2 < w1))) continue;
                    want.push_back({w1, w2, gamma, mm});
                  }
              }
            }
          std::sort(got.begin(), got.end());
          std::sort(want.begin(), want.end());
          if (got != want) throw std::runtime_error("merge differs from the quadratic oracle");
          return pair_count_bound(pairs);
        };
        BigUint capped_bound = run_bound(capped);
        BigUint full_bound = run_bound(full);
        auto exact = exhaustive_components(spec, code, pendants,
                                           partition.ch_e[size_t(code.path)]);
        BigUint exact_count(std::uint64_t(exact.size()));
        if (!(capped_bound <= exact_count))
          throw std::runtime_error("capped bound exceeds the exact count");
        if (!(full_bound == exact_count))
          throw std::runtime_error("uncapped bound " + full_bound.str() + " != exact " +
                                   std::to_string(exact.size()));
        ++edges_checked;
      }
    }
    detail = std::to_string(edges_checked) + " edge components verified";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(6, "counting soundness against exhaustive enumeration", ok, detail);
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
  bool ok = true;
  std::string detail;
  try {
    auto spec = monocyclic_co_spec();
    auto a = build_model(spec);
    auto b = build_model(spec);
    if (a.model.lp_string() != b.model.lp_string())
      throw std::runtime_error("LP files differ between runs");
    ElementTable t = spec.chem.table;
    auto g = testutil::cycle_graph(6, t.id("C"));
    int o = g.add_vertex(t.id("O"));
    g.add_noncore_edge(0, o, 1);
    g.rho = 2;
    IsomerOptions opt;
    opt.dp.sample_cap = -1;
    auto r1 = generate_isomers(g, spec, opt);
    auto r2 = generate_isomers(g, spec, opt);
    if (r1.manifest != r2.manifest) throw std::runtime_error("manifests differ");
    if (r1.graphs.size() != r2.graphs.size()) throw std::runtime_error("outputs differ");
    for (size_t i = 0; i < r1.graphs.size(); ++i)
      if (graph_to_string(r1.graphs[i], t) != graph_to_string(r2.graphs[i], t))
        throw std::runtime_error("graph bytes differ");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(7, "byte-identical artifacts across runs", ok, detail);
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
  bool ok = true;
  std::string detail;
  try {
    json doc;
    doc["seed"]["vertices"] = 2;
    doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                            {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
    doc["core"]["ell"] = {{"a1", {2, 5}}, {"a2", {1, 5}}};
    doc["core"]["cs"] = {3, 6};
    doc["noncore"]["n"] = {3, 8};
    doc["noncore"]["rho"] = 2;
    doc["noncore"]["dg4_nc_ub"] = 0;
    doc["chem"]["lambda"] = {"C"};
    auto p3 = scheme_parameters(parse_spec(doc));
    if (p3.dmax != 3 || p3.nT != 6 || p3.nF != 6)
      throw std::runtime_error("dmax=3 sizes wrong");
    doc["noncore"]["dg4_nc_ub"] = 1;
    auto p4 = scheme_parameters(parse_spec(doc));
    if (p4.dmax != 4 || p4.nT != 8 || p4.nF != 12)
      throw std::runtime_error("dmax=4 sizes wrong");
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(8, "scheme-graph closed-form arithmetic", ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "FAILURES: " + std::to_string(failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
