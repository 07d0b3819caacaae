#include <functional>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "molinfer/isomer_pipeline.hpp"

using namespace molinfer;
using testutil::cycle_graph;
using testutil::h1_decorated;

namespace {

TargetSpec mono_spec(std::vector<std::string> lambda, int n_star, int cs_lb, int cs_ub,
                     int ell_ub = 0) {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  int ub = ell_ub > 0 ? ell_ub : cs_ub - 1;
  doc["core"]["ell"] = {{"a1", {2, ub}}, {"a2", {1, ub}}};
  doc["core"]["cs"] = {cs_lb, cs_ub};
  doc["noncore"]["n"] = {cs_lb, n_star};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = lambda;
  return parse_spec(doc);
}

// enumerate all rooted chemical trees with <= nmax vertices over the element
// list, de-duplicated by the canonical code of a root-marked graph; fully
// independent of the DP's enumerator
void oracle_rooted_trees(const ElementTable& t, const std::vector<int>& elems, int nmax,
                         int hmax, std::vector<RootedTree>& out) {
  std::set<std::string> seen;
  for (int n = 1; n <= nmax; ++n) {
    std::vector<std::vector<int>> shapes;
    {
      std::vector<int> parent(size_t(n), -1);
      if (n == 1) {
        shapes.push_back(parent);
      } else {
        std::function<void(int)> rec = [&](int i) {
          if (i == n) {
            shapes.push_back(parent);
            return;
          }
          for (int p = std::max(parent[size_t(i - 1)], 0); p < i; ++p) {
            parent[size_t(i)] = p;
            rec(i + 1);
          }
        };
        rec(1);
      }
    }
    for (const auto& par : shapes) {
      // assign elements and multiplicities exhaustively
      std::vector<int> elem(static_cast<size_t>(n), 0), beta(static_cast<size_t>(n), 0);
      std::function<void(int)> assign = [&](int i) -> void {
        if (i == n) {
          RootedTree tree;
          for (int v = 0; v < n; ++v)
            tree.nodes.push_back(
                RootedTree::Node{elem[size_t(v)], par[size_t(v)], v == 0 ? 0 : beta[size_t(v)]});
          // valence and height checks
          auto bs = tree.beta_sums();
          for (int v = 0; v < n; ++v)
            if (bs[size_t(v)] > t.valence(tree.nodes[size_t(v)].elem)) return;
          if (tree.heights()[0] > hmax) return;
          // canonical dedupe on a root-marked labeled graph
          ChemicalGraph g = tree.to_graph_all_noncore();
          g.alpha[0] += 1000;  // mark the root
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
}

}  // namespace

TEST_CASE("path partition fixtures") {
  ElementTable t = ElementTable::builtin();
  int C = t.id("C");

  // the worked rank-2 core admits the five-path partition over the four
  // path end-vertices
  auto h1 = h1_decorated(C);
  auto p = make_path_partition(h1, 2, {0, 4, 10, 14}, Bounds{0, 10});
  CHECK(p.paths.size() == 5);
  // every core edge in exactly one path
  std::map<std::pair<int, int>, int> cover;
  for (const auto& path : p.paths)
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      std::pair<int, int> k = std::make_pair(std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1]));
      cover[{k.first, k.second}]++;
    }
  CHECK(cover.size() == h1.core_edges.size());
  for (auto& [k, c] : cover) CHECK(c == 1);

  // a bare cycle with one base vertex becomes a single self-loop path
  auto c6 = cycle_graph(6, C);
  auto pc = make_path_partition(c6, 2, {0}, Bounds{0, 4});
  CHECK(pc.paths.size() == 1);
  CHECK(pc.paths[0].front() == 0);
  CHECK(pc.paths[0].back() == 0);
  CHECK(pc.paths[0].size() == 7);
}

TEST_CASE("decomposition reproduces the graph frequency vector") {
  ElementTable t = ElementTable::builtin();
  int C = t.id("C"), O = t.id("O");

  SUBCASE("worked rank-2 example") {
    auto h1 = h1_decorated(C);
    auto p = make_path_partition(h1, 2, {0, 4, 10, 14}, Bounds{0, 10});
    auto dec = decompose(h1, p, 2, t);
    CHECK(decomposition_sum(dec) == graph_frequency_vector(h1, 2, t));
  }
  SUBCASE("bare cycle, one base vertex") {
    auto c6 = cycle_graph(6, C);
    auto p = make_path_partition(c6, 2, {0}, Bounds{0, 4});
    auto dec = decompose(c6, p, 2, t);
    CHECK(decomposition_sum(dec) == graph_frequency_vector(c6, 2, t));
    // isolated-root vertex component: all-zero vector
    CHECK(dec.vcodes[0].x.entries.empty());
    CHECK(dec.vcodes[0].d == 0);
    CHECK(dec.vcodes[0].delta == 2);
  }
  SUBCASE("decorated cycles, random") {
    std::mt19937 rng(99);
    std::vector<int> elems{C, O, t.id("N")};
    for (int it = 0; it < 60; ++it) {
      auto g = testutil::random_cyclic(rng, t, 12, elems);
      auto d = rho_decompose(g, 2);
      if (!d.lean) continue;
      // base set: all core vertices of core degree != 2 plus branch cores,
      // plus one fallback vertex
      std::vector<int> core_deg(size_t(g.n()), 0);
      for (auto& e : g.core_edges) { core_deg[size_t(e.u)]++; core_deg[size_t(e.v)]++; }
      std::set<int> base(d.branch_core_vertices.begin(), d.branch_core_vertices.end());
      for (int v = 0; v < g.n(); ++v)
        if (d.is_core[size_t(v)] && core_deg[size_t(v)] >= 3) base.insert(v);
      if (base.empty())
        for (int v = 0; v < g.n(); ++v)
          if (d.is_core[size_t(v)]) { base.insert(v); break; }
      auto p = make_path_partition(g, 2, {base.begin(), base.end()}, Bounds{0, 12});
      auto dec = decompose(g, p, 2, t);
      CHECK(decomposition_sum(dec) == graph_frequency_vector(g, 2, t));
    }
  }
}

TEST_CASE("edge component codes match direct inspection") {
  ElementTable t = ElementTable::builtin();
  int C = t.id("C"), O = t.id("O");
  auto g = cycle_graph(5, C);
  g.alpha[1] = O;
  g.core_edges[0].beta = 2;  // edge 0-1 double
  int leaf = g.add_vertex(C);
  g.add_noncore_edge(2, leaf, 1);
  auto p = make_path_partition(g, 2, {0, 2}, Bounds{0, 5});
  auto dec = decompose(g, p, 2, t);
  auto deg = g.degrees();
  for (const auto& c : dec.ecodes) {
    const auto& path = p.paths[size_t(c.path)];
    CHECK(c.end[0].elem == g.alpha[size_t(path.front())]);
    CHECK(c.end[1].elem == g.alpha[size_t(path.back())]);
    CHECK(c.end[0].delta == deg[size_t(path.front())] - 1);
    CHECK(c.end[1].delta == deg[size_t(path.back())] - 1);
    CHECK(c.ell == int(path.size()) - 1);
  }
}

TEST_CASE("step 1 counts match the independent enumeration oracle") {
  // generous budget over a one-element alphabet; every (d, m) class count
  // must equal the brute-force enumeration with isomorph rejection
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, 9}}, {"a2", {1, 9}}};
  doc["core"]["cs"] = {3, 10};
  doc["noncore"]["n"] = {3, 30};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = {"C"};
  auto spec = parse_spec(doc);
  const auto& t = spec.chem.table;
  int C = t.id("C");

  // budget: plenty of every external configuration
  FrequencyVector budget;
  for (const auto& g : spec.chem.gamma_ex) budget.add(key_ex(g), 20);
  DpOptions opt;
  opt.sample_cap = -1;
  DpRun run(spec.chem, 2, 3, budget, Bounds{0, 2}, opt);
  run.step1();

  std::vector<RootedTree> oracle;
  oracle_rooted_trees(t, {C}, 8, 2, oracle);
  // class (i): height <= rho, root degree d, bond sum m, n <= 2d+2
  for (int d = 0; d <= 1; ++d) {  // min(val,dmax)-2 = 1 for carbon at dmax 3
    for (int m = d; m <= 2; ++m) {
      int want = 0;
      for (const auto& tr : oracle) {
        int children = 0;
        for (int v = 1; v < tr.n(); ++v)
          if (tr.nodes[size_t(v)].parent == 0) ++children;
        if (children != d) continue;
        int bs = tr.n() == 1 ? 0 : tr.beta_sums()[0];
        if (bs != m) continue;
        if (tr.n() > 2 * d + 2) continue;
        bool deg_ok = true;
        for (int v = 1; v < tr.n(); ++v) {
          int kids = 0;
          for (int w = v + 1; w < tr.n(); ++w)
            if (tr.nodes[size_t(w)].parent == v) ++kids;
          if (kids > 2) deg_ok = false;  // dmax - 1
        }
        if (!deg_ok) continue;
        ++want;
      }
      BigUint got(0);
      auto it = run.inl0.find(DpKey{C, d, m, -1});
      if (it != run.inl0.end())
        for (auto& [w, e] : it->second.entries) got += e.count;
      CHECK(got == BigUint(std::uint64_t(want)));
    }
  }
  // every stored vector respects the budget and has no branch-core entry
  for (auto& [k, set] : run.inl0)
    for (auto& [w, e] : set.entries) {
      CHECK(w.leq(budget));
      CHECK(w.tbc() == 0);
    }
  for (auto& [k, set] : run.en0)
    for (auto& [w, e] : set.entries) CHECK(w.tbc() == 0);
}

TEST_CASE("step 2 vacuous cases") {
  json doc;
  doc["seed"]["vertices"] = 2;
  doc["seed"]["edges"] = {{{"id", "a1"}, {"u", 1}, {"v", 2}, {"kind", "ge2"}},
                          {{"id", "a2"}, {"u", 1}, {"v", 2}, {"kind", "ge1"}}};
  doc["core"]["ell"] = {{"a1", {2, 9}}, {"a2", {1, 9}}};
  doc["core"]["cs"] = {3, 10};
  doc["noncore"]["n"] = {3, 30};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = {"C"};
  auto spec = parse_spec(doc);
  // budget with no internal-stratum entries: every en level must stay empty
  FrequencyVector budget;
  for (const auto& g : spec.chem.gamma_ex) budget.add(key_ex(g), 10);
  DpOptions opt;
  DpRun run(spec.chem, 2, 3, budget, Bounds{0, 8}, opt);
  run.run_steps_1_to_3();
  for (auto& [h, sets] : run.en)
    for (auto& [k, set] : sets) CHECK(set.entries.empty());
}

TEST_CASE("step 5 merge equals the quadratic all-pairs oracle") {
  ElementTable t = ElementTable::builtin();
  int C = t.id("C"), O = t.id("O");
  auto spec = mono_spec({"C", "O"}, 14, 3, 8);
  // toy target: cycle with two pendant decorations on one long path
  auto g = cycle_graph(6, C);
  int o1 = g.add_vertex(O);
  g.add_noncore_edge(1, o1, 1);
  int c1 = g.add_vertex(C);
  g.add_noncore_edge(4, c1, 1);
  g.rho = 2;
  auto rep = check_extension(g, spec);
  REQUIRE(rep.pass);
  auto partition = choose_path_partition(g, spec, rep);
  auto dec = decompose(g, partition, 2, t);
  DpOptions opt;
  opt.sample_cap = -1;
  for (const auto& code : dec.ecodes) {
    DpRun run(spec.chem, 2, 3, code.x, partition.ch_e[size_t(code.path)], opt);
    run.run_steps_1_to_3();
    int d1 = (code.ell - 1) / 2, d2 = code.ell - 1 - d1;
    auto s1 = step4_side(run, code.end[0], d1, partition.ch_e[size_t(code.path)]);
    auto s2 = step4_side(run, code.end[1], d2, partition.ch_e[size_t(code.path)]);
    bool inter = d1 == d2 && code.end[0].elem == code.end[1].elem &&
                 code.end[0].mult == code.end[1].mult && code.end[0].delta == code.end[1].delta;
    auto pairs = step5_pairs(run, code, s1, s2, partition.ch_e[size_t(code.path)], inter);

    // quadratic oracle with the identical keep rule
    using Sig = std::tuple<FrequencyVector, FrequencyVector, EdgeConfig, int>;
    std::vector<Sig> want, got;
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
    for (const auto& p : pairs) got.push_back({p.w1, p.w2, p.gamma, p.mult});
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    CHECK(got == want);
  }
}

TEST_CASE("assembled outputs honor the isomorphism contract") {
  ElementTable t = ElementTable::builtin();
  int C = t.id("C"), O = t.id("O");
  auto spec = mono_spec({"C", "O"}, 14, 3, 8);
  auto g = cycle_graph(6, C);
  int o = g.add_vertex(O);
  g.add_noncore_edge(0, o, 1);
  int c1 = g.add_vertex(C);
  g.add_noncore_edge(3, c1, 1);
  int c2 = g.add_vertex(C);
  g.add_noncore_edge(c1, c2, 2);
  g.rho = 2;

  IsomerOptions opt;
  opt.dp.sample_cap = -1;
  auto res = generate_isomers(g, spec, opt);
  REQUIRE(!res.graphs.empty());
  auto fref = graph_frequency_vector(g, 2, t);
  auto f0 = feature_vector(g, 2, observed_alphabet(g, 2, t), t);
  auto core_ref = [&](const ChemicalGraph& x) {
    auto d = rho_decompose(x, 2);
    ChemicalGraph core;
    std::map<int, int> remap;
    for (int v = 0; v < x.n(); ++v)
      if (d.is_core[size_t(v)]) remap[v] = core.add_vertex(x.alpha[size_t(v)]);
    for (auto& e : x.core_edges) core.add_core_edge(remap[e.u], remap[e.v], e.beta);
    return core;
  };
  auto core_in = core_ref(g);
  std::string self = canonical_code(g);
  bool found_self = false;
  for (const auto& out : res.graphs) {
    CHECK(graph_frequency_vector(out, 2, t) == fref);
    CHECK(feature_vector(out, 2, observed_alphabet(out, 2, t), t) == f0);
    CHECK(graphs_isomorphic(core_ref(out), core_in));
    CHECK(check_extension(out, spec).pass);
    if (canonical_code(out) == self) found_self = true;
  }
  CHECK(found_self);
  // per-element heights stay within the uniform bounds
  for (const auto& out : res.graphs) {
    auto d = rho_decompose(out, 2);
    CHECK(d.ch <= spec.noncore.n_star);
  }
}

TEST_CASE("per-edge count bound equals the exhaustive component count on a toy instance") {
  ElementTable t = ElementTable::builtin();
  int C = t.id("C"), O = t.id("O");
  auto spec = mono_spec({"C", "O"}, 14, 3, 8);
  auto g = cycle_graph(6, C);
  int o = g.add_vertex(O);
  g.add_noncore_edge(0, o, 1);
  int c1 = g.add_vertex(C);
  g.add_noncore_edge(3, c1, 1);
  int c2 = g.add_vertex(C);
  g.add_noncore_edge(c1, c2, 2);
  g.rho = 2;
  auto rep = check_extension(g, spec);
  REQUIRE(rep.pass);
  auto partition = choose_path_partition(g, spec, rep);
  auto dec = decompose(g, partition, 2, t);

  DpOptions opt;
  opt.sample_cap = -1;
  std::vector<RootedTree> pendants;
  oracle_rooted_trees(t, {C, O}, 5, 2, pendants);

  for (const auto& code : dec.ecodes) {
    DpRun run(spec.chem, 2, 3, code.x, partition.ch_e[size_t(code.path)], opt);
    run.run_steps_1_to_3();
    int d1 = (code.ell - 1) / 2, d2 = code.ell - 1 - d1;
    auto s1 = step4_side(run, code.end[0], d1, partition.ch_e[size_t(code.path)]);
    auto s2 = step4_side(run, code.end[1], d2, partition.ch_e[size_t(code.path)]);
    bool inter = d1 == d2 && code.end[0].elem == code.end[1].elem &&
                 code.end[0].mult == code.end[1].mult && code.end[0].delta == code.end[1].delta;
    auto pairs = step5_pairs(run, code, s1, s2, partition.ch_e[size_t(code.path)], inter);
    BigUint bound = pair_count_bound(pairs);

    // exhaustive oracle: distribute pendant trees over the interior path
    // vertices in every way, count distinct components matching the code
    std::set<std::string> distinct;
    int interior = code.ell - 1;
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
            // close: check the component vector against the code
            RootedTree tree;
            // rebuild as RootedTree rooted at backbone end0
            // backbone ids: 0..ell in comp as constructed below
            // compute f via graph machinery instead: construct bi-rooted tree
            // by walking comp
            // simpler: translate comp (a tree) into RootedTree via BFS from 0
            std::map<int, int> remap{{0, 0}};
            tree.nodes.push_back({comp.alpha[0], -1, 0});
            std::vector<int> frontier{0};
            auto adj = comp.adjacency();
            std::vector<char> vis(size_t(comp.n()), 0);
            vis[0] = 1;
            while (!frontier.empty()) {
              std::vector<int> next;
              for (int u : frontier)
                for (auto [w, b] : adj[size_t(u)])
                  if (!vis[size_t(w)]) {
                    vis[size_t(w)] = 1;
                    tree.nodes.push_back({comp.alpha[size_t(w)], remap[u], b});
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
            // orientation-insensitive dedupe with marked terminals
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
            // attach pend's children under v (pend root element must match)
            if (pend.nodes[0].elem != comp.alpha[size_t(v)]) continue;
            if (comp.n() + pend.n() - 1 > total_n) continue;
            ChemicalGraph next = comp;
            std::vector<int> remap(size_t(pend.n()), -1);
            remap[0] = v;
            bool ok = true;
            for (int j = 1; j < pend.n(); ++j) {
              remap[size_t(j)] = next.add_vertex(pend.nodes[size_t(j)].elem);
              next.add_noncore_edge(remap[size_t(pend.nodes[size_t(j)].parent)],
                                    remap[size_t(j)], pend.nodes[size_t(j)].beta);
            }
            if (!ok) continue;
            fill(pos + 1, next, backbone);
          }
        };
    // enumerate backbone element and multiplicity assignments
    std::function<void(int, ChemicalGraph&, std::vector<int>&)> spine =
        [&](int pos, ChemicalGraph& comp, std::vector<int>& backbone) {
          if (pos == code.ell + 1) {
            fill(0, comp, backbone);
            return;
          }
          bool last = pos == code.ell;
          std::vector<int> elems = last ? std::vector<int>{code.end[1].elem}
                                        : std::vector<int>{C, O};
          for (int e : elems) {
            std::vector<int> mults;
            if (pos == 1 && code.ell == 1) {
              if (code.end[0].mult != code.end[1].mult) continue;
              mults = {code.end[0].mult};
            } else if (pos == 1) {
              mults = {code.end[0].mult};
            } else if (last) {
              mults = {code.end[1].mult};
            } else {
              for (int m = 1; m <= 3; ++m)
                if (comults.count(m)) mults.push_back(m);
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

    CHECK(bound == BigUint(std::uint64_t(distinct.size())));
  }
}
