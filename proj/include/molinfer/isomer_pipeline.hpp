#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "molinfer/isomer_assemble.hpp"

namespace molinfer {

struct IsomerOptions {
  DpOptions dp;
  long long limit = -1;   // max graphs emitted; -1 = all sample combinations
  bool dedupe = false;    // drop isomorphic duplicates among outputs
};

struct IsomerResult {
  std::vector<ChemicalGraph> graphs;
  BigUint count_bound;
  bool truncated = false;
  json manifest;
};

namespace isodetail {

// joined target e-component: both halves plus the bridging edge
struct EdgeChoice {
  TreePtr t1, t2;
  int mult = 1;
};

struct EdgeStore {
  std::vector<EdgeChoice> choices;
  BigUint count;
  size_t pair_count = 0;
};

struct VertexStore {
  std::vector<TreePtr> choices;
  BigUint count;
};

// grafts a rooted tree into the output graph with its root mapped to an
// existing vertex; returns nothing, noncore edges run parent -> child
inline void graft_pendant(ChemicalGraph& g, const RootedTree& t, int root_vertex) {
  std::vector<int> map(size_t(t.n()), -1);
  map[0] = root_vertex;
  for (int j = 1; j < t.n(); ++j) {
    map[size_t(j)] = g.add_vertex(t.nodes[size_t(j)].elem);
    g.add_noncore_edge(map[size_t(t.nodes[size_t(j)].parent)], map[size_t(j)],
                       t.nodes[size_t(j)].beta);
  }
}

// grafts one half of an e-component: r2 maps to the base vertex, the rest is
// fresh; returns the graph id of r1 (the bridge end)
inline int graft_half(ChemicalGraph& g, const RootedTree& t, int base_vertex) {
  auto bb = t.backbone_mask();
  std::vector<int> map(size_t(t.n()), -1);
  for (int j = 0; j < t.n(); ++j)
    map[size_t(j)] = j == t.r2 ? base_vertex : g.add_vertex(t.nodes[size_t(j)].elem);
  for (int j = 1; j < t.n(); ++j) {
    int p = t.nodes[size_t(j)].parent;
    if (bb[size_t(j)] && bb[size_t(p)])
      g.add_core_edge(map[size_t(p)], map[size_t(j)], t.nodes[size_t(j)].beta);
    else
      g.add_noncore_edge(map[size_t(p)], map[size_t(j)], t.nodes[size_t(j)].beta);
  }
  return map[0];
}

}  // namespace isodetail

// The full Stage-5 run: decompose the input, rebuild the vector sets, pair
// the halves, and assemble target graphs.
inline IsomerResult generate_isomers(const ChemicalGraph& gd, const TargetSpec& spec,
                                     const IsomerOptions& opt = {}) {
  const ElementTable& table = spec.chem.table;
  int rho = spec.rho();
  auto rep = check_extension(gd, spec);
  if (!rep.pass)
    throw IsomerError("input graph fails the target specification:\n" + rep.summary());
  PathPartition partition = choose_path_partition(gd, spec, rep);
  Decomposition dec = decompose(gd, partition, rho, table);
  if (!(decomposition_sum(dec) == graph_frequency_vector(gd, rho, table)))
    throw IsomerError("component vectors do not sum to the graph frequency vector");
  int dmax = spec.noncore.dg4_nc_ub == 0 ? 3 : 4;

  IsomerResult res;
  json mverts = json::array(), medges = json::array();
  std::vector<isodetail::VertexStore> vstores;
  std::vector<isodetail::EdgeStore> estores;
  res.count_bound = BigUint(1);

  for (size_t vi = 0; vi < dec.vcodes.size(); ++vi) {
    const VertexCode& c = dec.vcodes[vi];
    DpRun run(spec.chem, rho, dmax, c.x, partition.ch_v[vi], opt.dp);
    run.run_steps_1_to_3();
    VecSet sb = run.target_rooted(c.delta, c.d, c.m, c.elem, partition.ch_v[vi]);
    isodetail::VertexStore store;
    store.count = BigUint(0);
    for (auto& [w, e] : sb.entries) {
      store.count += e.count;
      for (auto& s : e.samples) store.choices.push_back(s);
    }
    res.truncated = res.truncated || run.truncated || sb.truncated;
    if (store.choices.empty())
      throw IsomerError("empty component store at base vertex u" + std::to_string(vi + 1));
    mverts.push_back({{"vertex", int(vi) + 1},
                      {"store", store.choices.size()},
                      {"count", store.count.str()}});
    res.count_bound = res.count_bound * store.count;
    vstores.push_back(std::move(store));
  }

  for (size_t ei = 0; ei < dec.ecodes.size(); ++ei) {
    const EdgeCode& c = dec.ecodes[ei];
    DpRun run(spec.chem, rho, dmax, c.x, partition.ch_e[ei], opt.dp);
    run.run_steps_1_to_3();
    int d1 = (c.ell - 1) / 2, d2 = c.ell - 1 - d1;
    SideSets s1 = step4_side(run, c.end[0], d1, partition.ch_e[ei]);
    SideSets s2 = step4_side(run, c.end[1], d2, partition.ch_e[ei]);
    bool interchangeable = d1 == d2 && c.end[0].elem == c.end[1].elem &&
                           c.end[0].mult == c.end[1].mult && c.end[0].delta == c.end[1].delta;
    auto pairs = step5_pairs(run, c, s1, s2, partition.ch_e[ei], interchangeable);
    isodetail::EdgeStore store;
    store.pair_count = pairs.size();
    store.count = pair_count_bound(pairs);
    for (const auto& p : pairs)
      for (const auto& t1 : p.samples1)
        for (const auto& t2 : p.samples2)
          store.choices.push_back({t1, t2, p.mult});
    res.truncated = res.truncated || run.truncated;
    if (store.choices.empty())
      throw IsomerError("empty component store at base edge " + std::to_string(ei + 1));
    medges.push_back({{"path", int(ei) + 1},
                      {"length", c.ell},
                      {"pairs", store.pair_count},
                      {"count", store.count.str()}});
    res.count_bound = res.count_bound * store.count;
    estores.push_back(std::move(store));
  }

  // cartesian product over the stores, deterministic odometer order
  std::set<std::string> seen;
  std::vector<size_t> idx(vstores.size() + estores.size(), 0);
  bool done = false;
  while (!done) {
    ChemicalGraph g;
    g.rho = rho;
    for (size_t vi = 0; vi < dec.vcodes.size(); ++vi) g.add_vertex(dec.vcodes[vi].elem);
    for (size_t vi = 0; vi < vstores.size(); ++vi)
      isodetail::graft_pendant(g, *vstores[vi].choices[idx[vi]], int(vi));
    for (size_t ei = 0; ei < estores.size(); ++ei) {
      const auto& choice = estores[ei].choices[idx[vstores.size() + ei]];
      const auto& path = partition.paths[ei];
      int b1 = partition.base_index(path.front());
      int b2 = partition.base_index(path.back());
      int r1a = isodetail::graft_half(g, *choice.t1, b1);
      int r1b = isodetail::graft_half(g, *choice.t2, b2);
      g.add_core_edge(r1a, r1b, choice.mult);
    }
    bool emit = true;
    if (opt.dedupe) emit = seen.insert(canonical_code(g)).second;
    if (emit) res.graphs.push_back(std::move(g));
    if (opt.limit >= 0 && (long long)res.graphs.size() >= opt.limit) break;
    // advance odometer
    done = true;
    for (size_t k = 0; k < idx.size(); ++k) {
      size_t cap = k < vstores.size() ? vstores[k].choices.size()
                                      : estores[k - vstores.size()].choices.size();
      if (++idx[k] < cap) { done = false; break; }
      idx[k] = 0;
    }
  }

  res.manifest = json{{"base_vertices", mverts},
                      {"base_edges", medges},
                      {"count_lower_bound", res.count_bound.str()},
                      {"truncated", res.truncated},
                      {"emitted", res.graphs.size()},
                      {"dedupe", opt.dedupe}};
  return res;
}

}  // namespace molinfer
