#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "molinfer/check.hpp"
#include "molinfer/frequency.hpp"
#include "molinfer/graph.hpp"
#include "molinfer/spec.hpp"
#include "molinfer/structure.hpp"

namespace molinfer {

struct IsomerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Path partition of the core plus the base multigraph it contracts to.
// paths[j] lists core vertices; a path may close on itself (base self-loop).
struct PathPartition {
  std::vector<int> base_vertices;            // graph vertex ids
  std::vector<std::vector<int>> paths;       // each starts and ends in base_vertices
  std::vector<Bounds> ch_v;                  // per base vertex
  std::vector<Bounds> ch_e;                  // per path

  int base_index(int vertex) const {
    for (size_t i = 0; i < base_vertices.size(); ++i)
      if (base_vertices[i] == vertex) return int(i);
    throw IsomerError("vertex is not a base vertex");
  }
  int base_degree(int vertex) const {
    int d = 0;
    for (const auto& p : paths) {
      if (p.front() == vertex) ++d;
      if (p.back() == vertex) ++d;
    }
    return d;
  }
};

// Codes of the vertex- and edge-components (section on graph decomposition).
struct VertexCode {
  int vertex = -1;     // base vertex in G
  int elem = -1;       // a_v
  int d = 0;           // pendant degree
  int m = 0;           // pendant bond sum
  int delta = 0;       // base-graph degree
  int h_star = 0;      // height of the component
  FrequencyVector x;   // f(T_v[+delta])
  RootedTree tree;     // the component itself (rooted c-tree)
};

struct EdgeEndCode {
  int elem = -1;    // a^e_i
  int mult = 0;     // m^e_i: multiplicity of the terminal path edge
  int delta = 0;    // Delta^e_i: deg_G(u_i) - 1
};

struct EdgeCode {
  int path = -1;                 // index into partition.paths
  std::array<EdgeEndCode, 2> end;
  int ell = 0;                   // path length
  int h_star = 0;                // height of the component
  FrequencyVector x;             // f(T_e[+Delta_1, Delta_2])
  RootedTree tree;               // opened bi-rooted c-tree (r1 = end 0)
};

struct Decomposition {
  PathPartition partition;
  std::vector<VertexCode> vcodes;  // aligned with partition.base_vertices
  std::vector<EdgeCode> ecodes;    // aligned with partition.paths
};

namespace isodetail {

// Rooted component tree at a base vertex: the pendant forest hanging at v,
// in parent-before-child order.
inline RootedTree pendant_component(const ChemicalGraph& g, const RhoDecomposition& d, int v) {
  RootedTree t;
  t.nc = false;
  t.nodes.push_back({g.alpha[size_t(v)], -1, 0});
  std::map<int, int> remap{{v, 0}};
  // collect pendant vertices below v in BFS order
  std::vector<std::pair<int, int>> frontier{{v, 0}};
  auto adj = g.adjacency();
  while (!frontier.empty()) {
    std::vector<std::pair<int, int>> next;
    for (auto [u, node] : frontier)
      for (auto [w, b] : adj[size_t(u)]) {
        if (d.is_core[size_t(w)] || d.parent[size_t(w)] != u) continue;
        t.nodes.push_back({g.alpha[size_t(w)], node, b});
        remap[w] = int(t.nodes.size()) - 1;
        next.push_back({w, int(t.nodes.size()) - 1});
      }
    frontier = std::move(next);
  }
  return t;
}

}  // namespace isodetail

// Builds the partition dictated by the specification: base vertices are the
// seed-vertex images and base edges the realized paths (discarded optional
// edges drop out).
inline PathPartition choose_path_partition(const ChemicalGraph& g, const TargetSpec& spec,
                                           const ExtensionReport& rep) {
  if (!rep.pass)
    throw IsomerError("graph is not a valid extension of the specification");
  RhoDecomposition d = rho_decompose(g, spec.rho());
  if (!d.lean) throw IsomerError("input graph is not rho-lean");
  PathPartition p;
  p.base_vertices = rep.embedding.phi;
  for (size_t e = 0; e < spec.seed.edges.size(); ++e) {
    if (rep.embedding.paths[e].empty()) continue;  // discarded zero_one edge
    p.paths.push_back(rep.embedding.paths[e]);
    p.ch_e.push_back(spec.noncore.ch_e[e]);
  }
  p.ch_v = spec.noncore.ch_v;
  return p;
}

// Flexible partition: base set given directly, uniform height bounds; paths
// are traced through degree-2 core vertices between base vertices.
inline PathPartition make_path_partition(const ChemicalGraph& g, int rho,
                                         std::vector<int> base, Bounds uniform_ch) {
  RhoDecomposition d = rho_decompose(g, rho);
  if (!d.lean) throw IsomerError("input graph is not rho-lean");
  std::set<int> base_set(base.begin(), base.end());
  // paths may only pass through interior vertices of core-degree 2, so every
  // higher-degree core vertex must be in the base set; branch-core vertices
  // may sit inside paths (their pendant trees travel with the edge component)
  std::vector<int> core_deg(size_t(g.n()), 0);
  for (const auto& e : g.core_edges) {
    core_deg[size_t(e.u)]++;
    core_deg[size_t(e.v)]++;
  }
  for (int v = 0; v < g.n(); ++v)
    if (d.is_core[size_t(v)] && core_deg[size_t(v)] >= 3 && !base_set.count(v))
      throw IsomerError("degree-3 core vertex missing from the base set");
  PathPartition p;
  p.base_vertices = std::move(base);
  // trace paths: consume core edges walking from base vertices through
  // degree-2 interior vertices
  std::map<std::pair<int, int>, int> edge_left;
  auto key = [](int a, int b) { return a < b ? std::pair<int, int>{a, b} : std::pair<int, int>{b, a}; };
  std::vector<std::vector<std::pair<int, int>>> cadj(size_t(g.n()));
  for (const auto& e : g.core_edges) {
    auto k = key(e.u, e.v);
    edge_left[{k.first, k.second}]++;
    cadj[size_t(e.u)].push_back({e.v, e.beta});
    cadj[size_t(e.v)].push_back({e.u, e.beta});
  }
  for (int s : p.base_vertices)
    for (auto [w0, b0] : cadj[size_t(s)]) {
      (void)b0;
      // walk s -> w0 -> ... until the next base vertex
      auto k0 = key(s, w0);
      if (!edge_left[{k0.first, k0.second}]) continue;
      std::vector<int> path{s};
      int prev = s, cur = w0;
      edge_left[{k0.first, k0.second}]--;
      while (true) {
        path.push_back(cur);
        if (base_set.count(cur)) break;
        int nxt = -1;
        for (auto [w, b] : cadj[size_t(cur)]) {
          (void)b;
          if (w == prev && cadj[size_t(cur)].size() == 2) {
            // may still need to go back through a parallel edge; rely on
            // edge_left bookkeeping below
          }
          auto kk = key(cur, w);
          if (w != prev && edge_left[{kk.first, kk.second}] > 0) { nxt = w; break; }
        }
        if (nxt < 0) throw IsomerError("core walk got stuck; malformed core");
        auto kk = key(cur, nxt);
        edge_left[{kk.first, kk.second}]--;
        prev = cur;
        cur = nxt;
      }
      p.paths.push_back(path);
    }
  int used = 0;
  for (auto& [k2, v] : edge_left) used += v;
  if (used != 0) throw IsomerError("path partition did not cover every core edge");
  p.ch_v.assign(p.base_vertices.size(), uniform_ch);
  p.ch_e.assign(p.paths.size(), uniform_ch);
  return p;
}

// Splits the graph into vertex- and edge-components with their codes; the
// vector sum of all codes reproduces the graph's frequency vector exactly.
inline Decomposition decompose(const ChemicalGraph& g, const PathPartition& partition, int rho,
                               const ElementTable& table) {
  RhoDecomposition d = rho_decompose(g, rho);
  Decomposition out;
  out.partition = partition;
  auto deg = g.degrees();

  for (int v : partition.base_vertices) {
    VertexCode c;
    c.vertex = v;
    c.elem = g.alpha[size_t(v)];
    c.delta = partition.base_degree(v);
    c.tree = isodetail::pendant_component(g, d, v);
    c.d = deg[size_t(v)] - c.delta;
    auto bs = c.tree.beta_sums();
    c.m = bs[0];
    c.h_star = c.tree.heights().empty() ? 0 : c.tree.heights()[0];
    if (c.d + c.delta != deg[size_t(v)])
      throw IsomerError("base-degree bookkeeping mismatch");
    c.x = tree_frequency_vector(c.tree, rho, table, c.delta, 0);
    out.vcodes.push_back(std::move(c));
  }

  std::map<std::pair<int, int>, int> beta_of;
  for (const auto& e : g.core_edges) {
    std::pair<int, int> k = e.u < e.v ? std::pair<int, int>{e.u, e.v} : std::pair<int, int>{e.v, e.u};
    beta_of[{k.first, k.second}] = e.beta;
  }
  for (size_t pi = 0; pi < partition.paths.size(); ++pi) {
    const auto& path = partition.paths[pi];
    EdgeCode c;
    c.path = int(pi);
    c.ell = int(path.size()) - 1;
    for (int side = 0; side < 2; ++side) {
      int u = side == 0 ? path.front() : path.back();
      int w = side == 0 ? path[1] : path[path.size() - 2];
      std::pair<int, int> k = u < w ? std::pair<int, int>{u, w} : std::pair<int, int>{w, u};
      c.end[size_t(side)] = {g.alpha[size_t(u)], beta_of.at({k.first, k.second}),
                             deg[size_t(u)] - 1};
    }
    // opened bi-rooted tree: r1 = front end, backbone through the interior
    // pendant components, r2 = back end (fresh copy when the path is closed)
    RootedTree t;
    t.nc = false;
    t.nodes.push_back({g.alpha[size_t(path.front())], -1, 0});
    int prev = 0;
    for (size_t q = 1; q + 1 < path.size(); ++q) {
      int v = path[q];
      std::pair<int, int> k = std::make_pair(std::min(path[q - 1], path[q]), std::max(path[q - 1], path[q]));
      RootedTree comp = isodetail::pendant_component(g, d, v);
      int base = int(t.nodes.size());
      t.nodes.push_back({comp.nodes[0].elem, prev, beta_of.at({k.first, k.second})});
      for (size_t j = 1; j < comp.nodes.size(); ++j)
        t.nodes.push_back({comp.nodes[j].elem, comp.nodes[j].parent + base, comp.nodes[j].beta});
      prev = base;
    }
    std::pair<int, int> klast = std::make_pair(std::min(path[path.size() - 2], path.back()), std::max(path[path.size() - 2], path.back()));
    t.nodes.push_back({g.alpha[size_t(path.back())], prev, beta_of.at({klast.first, klast.second})});
    t.r2 = int(t.nodes.size()) - 1;
    c.tree = std::move(t);
    {
      // component height: the tallest pendant tree on the interior
      auto bb = c.tree.backbone_mask();
      auto hs = c.tree.heights();
      for (int v = 0; v < c.tree.n(); ++v)
        if (bb[size_t(v)])
          for (int w = 1; w < c.tree.n(); ++w)
            if (c.tree.nodes[size_t(w)].parent == v && !bb[size_t(w)])
              c.h_star = std::max(c.h_star, hs[size_t(w)] + 1);
    }
    c.x = tree_frequency_vector(c.tree, rho, table, c.end[0].delta, c.end[1].delta);
    out.ecodes.push_back(std::move(c));
  }
  return out;
}

// sum of all component vectors; equals graph_frequency_vector on valid input
inline FrequencyVector decomposition_sum(const Decomposition& d) {
  FrequencyVector s;
  for (const auto& c : d.vcodes) s = s + c.x;
  for (const auto& c : d.ecodes) s = s + c.x;
  return s;
}

}  // namespace molinfer
