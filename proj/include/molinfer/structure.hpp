#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "molinfer/graph.hpp"

namespace molinfer {

// rank r(G) = |E| - |V| + 1 for a connected multigraph
inline int rank_of(const ChemicalGraph& g) { return g.m() - g.n() + 1; }

namespace detail {

// Bridge detection on the undirected view (iterative lowlink DFS with edge
// ids so parallel edges are handled).
inline std::vector<char> bridge_flags(int n, const std::vector<std::array<int, 3>>& edges) {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));  // (to, edge id)
  for (int i = 0; i < int(edges.size()); ++i) {
    adj[size_t(edges[size_t(i)][0])].push_back({edges[size_t(i)][1], i});
    adj[size_t(edges[size_t(i)][1])].push_back({edges[size_t(i)][0], i});
  }
  std::vector<int> tin(size_t(n), -1), low(size_t(n), -1);
  std::vector<char> bridge(edges.size(), 0);
  int timer = 0;
  struct Frame { int v, pe; size_t it; };
  for (int s = 0; s < n; ++s) {
    if (tin[size_t(s)] != -1) continue;
    std::vector<Frame> st{{s, -1, 0}};
    tin[size_t(s)] = low[size_t(s)] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      if (f.it < adj[size_t(f.v)].size()) {
        auto [to, id] = adj[size_t(f.v)][f.it++];
        if (id == f.pe) continue;
        if (tin[size_t(to)] != -1) {
          low[size_t(f.v)] = std::min(low[size_t(f.v)], tin[size_t(to)]);
        } else {
          tin[size_t(to)] = low[size_t(to)] = timer++;
          st.push_back({to, id, 0});
        }
      } else {
        int v = f.v, pe = f.pe;
        st.pop_back();
        if (!st.empty()) {
          int p = st.back().v;
          low[size_t(p)] = std::min(low[size_t(p)], low[size_t(v)]);
          if (low[size_t(v)] > tin[size_t(p)]) bridge[size_t(pe)] = 1;
        }
      }
    }
  }
  return bridge;
}

}  // namespace detail

// Core Cr(H): cycle vertices plus the vertices on paths between them.
// Returns the membership mask; cs = number of core vertices.  Computed from
// the definition: cycle vertices are endpoints of non-bridge edges, and the
// connecting paths are what survives pruning non-cycle leaves of the bridge
// forest.
struct CoreResult {
  std::vector<char> in_core;
  int cs = 0;
};

inline CoreResult core_of(const ChemicalGraph& g) {
  if (rank_of(g) < 1) throw std::invalid_argument("rank 0 has no core");
  int n = g.n();
  std::vector<std::array<int, 3>> edges;
  for (const auto& e : g.core_edges) edges.push_back({e.u, e.v, e.beta});
  for (const auto& e : g.noncore_edges) edges.push_back({e.u, e.v, e.beta});
  auto bridge = detail::bridge_flags(n, edges);
  std::vector<char> cyc(size_t(n), 0);
  for (size_t i = 0; i < edges.size(); ++i)
    if (!bridge[i]) { cyc[size_t(edges[i][0])] = 1; cyc[size_t(edges[i][1])] = 1; }

  // prune degree-1 vertices that are not cycle vertices until fixpoint
  std::vector<int> deg(size_t(n), 0);
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& e : edges) {
    adj[size_t(e[0])].push_back(e[1]);
    adj[size_t(e[1])].push_back(e[0]);
    deg[size_t(e[0])]++;
    deg[size_t(e[1])]++;
  }
  std::vector<char> alive(size_t(n), 1);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (deg[size_t(v)] == 1 && !cyc[size_t(v)]) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    alive[size_t(v)] = 0;
    for (int w : adj[size_t(v)]) {
      if (!alive[size_t(w)]) continue;
      if (--deg[size_t(w)] == 1 && !cyc[size_t(w)]) queue.push_back(w);
    }
  }
  CoreResult r;
  r.in_core = alive;
  for (char c : alive) r.cs += c;
  return r;
}

// Full branch-height decomposition for a branch-parameter rho.
struct RhoDecomposition {
  int rho = 1;
  std::vector<char> is_core;      // V^co mask
  std::vector<char> is_internal;  // rho-internal non-core vertices
  std::vector<int> parent;        // non-core: parent (toward core); core: -1
  std::vector<int> height;        // non-core: height within its pendant tree
  std::vector<int> pendant_root;  // non-core: the core vertex its tree hangs on
  std::vector<char> edge_internal;  // parallel to g.noncore order + reclassified core list; see below

  // per-edge classification of every edge of g, in the order (core_edges
  // then noncore_edges): 0 = core, 1 = rho-internal, 2 = rho-external
  std::vector<int> edge_class;

  std::vector<int> leaf_branches;      // leaf rho-branches
  std::vector<int> nonleaf_branches;   // non-leaf rho-branches
  std::vector<int> branch_core_vertices;  // V^bc
  std::vector<int> pendant_height;     // per core vertex: height of its pendant tree(s)
  std::vector<int> pendant_bl;         // per core vertex: leaf branches hanging below it
  int cs = 0;
  int ch = 0;
  int bl = 0;
  int bc = 0;
  int bh = 0;
  bool lean = false;

  int n_internal() const {
    int k = 0;
    for (char c : is_internal) k += c;
    return k;
  }
};

// rho_decompose classifies every vertex and edge of a cyclic graph per the
// branch-height machinery.  The stored core/non-core split of g is not
// trusted; membership is recomputed so malformed inputs are caught.
inline RhoDecomposition rho_decompose(const ChemicalGraph& g, int rho) {
  if (rho < 1) throw std::invalid_argument("rho must be >= 1");
  RhoDecomposition d;
  d.rho = rho;
  auto core = core_of(g);
  d.is_core = core.in_core;
  d.cs = core.cs;
  int n = g.n();

  // hang the pendant forest off the core
  auto adj = g.adjacency();
  d.parent.assign(size_t(n), -1);
  d.pendant_root.assign(size_t(n), -1);
  std::vector<int> order;
  std::vector<char> seen(size_t(n), 0);
  for (int v = 0; v < n; ++v)
    if (d.is_core[size_t(v)]) { seen[size_t(v)] = 1; }
  std::vector<int> frontier;
  for (int v = 0; v < n; ++v)
    if (d.is_core[size_t(v)]) frontier.push_back(v);
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int v : frontier)
      for (auto [w, b] : adj[size_t(v)])
        if (!seen[size_t(w)]) {
          seen[size_t(w)] = 1;
          d.parent[size_t(w)] = v;
          d.pendant_root[size_t(w)] =
              d.is_core[size_t(v)] ? v : d.pendant_root[size_t(v)];
          order.push_back(w);
          next.push_back(w);
        }
    frontier = std::move(next);
  }

  // heights bottom-up (order is BFS so reverse is child-before-parent)
  d.height.assign(size_t(n), 0);
  std::vector<std::vector<int>> children(static_cast<size_t>(n));
  for (int v : order)
    children[size_t(d.parent[size_t(v)])].push_back(v);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int h = 0;
    for (int c : children[size_t(*it)]) h = std::max(h, d.height[size_t(c)] + 1);
    d.height[size_t(*it)] = h;
  }

  // pendant-tree heights at core vertices; ch(G)
  d.pendant_height.assign(size_t(n), 0);
  for (int v = 0; v < n; ++v)
    if (d.is_core[size_t(v)])
      for (int c : children[size_t(v)])
        d.pendant_height[size_t(v)] =
            std::max(d.pendant_height[size_t(v)], d.height[size_t(c)] + 1);
  for (int v = 0; v < n; ++v) d.ch = std::max(d.ch, d.pendant_height[size_t(v)]);

  // branches: non-core only
  std::vector<char> is_branch(size_t(n), 0);
  for (int v : order) {
    if (d.height[size_t(v)] == rho) {
      is_branch[size_t(v)] = 1;
      d.leaf_branches.push_back(v);
    } else {
      int big = 0;
      for (int c : children[size_t(v)])
        if (d.height[size_t(c)] >= rho) ++big;
      if (big >= 2) {
        is_branch[size_t(v)] = 1;
        d.nonleaf_branches.push_back(v);
      }
    }
  }
  std::sort(d.leaf_branches.begin(), d.leaf_branches.end());
  std::sort(d.nonleaf_branches.begin(), d.nonleaf_branches.end());
  d.bl = int(d.leaf_branches.size());
  d.pendant_bl.assign(size_t(n), 0);
  for (int v : d.leaf_branches) d.pendant_bl[size_t(d.pendant_root[size_t(v)])]++;

  // internal = has a branch in its (inclusive) subtree
  d.is_internal.assign(size_t(n), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (is_branch[size_t(v)]) d.is_internal[size_t(v)] = 1;
    for (int c : children[size_t(v)])
      if (d.is_internal[size_t(c)]) d.is_internal[size_t(v)] = 1;
  }

  // branch-core vertices: core vertices with a rho-pendant tree
  for (int v = 0; v < n; ++v) {
    if (!d.is_core[size_t(v)]) continue;
    bool hit = false;
    for (int c : children[size_t(v)])
      if (d.is_internal[size_t(c)]) hit = true;
    if (hit) d.branch_core_vertices.push_back(v);
  }
  d.bc = int(d.branch_core_vertices.size());
  d.lean = d.bl == d.bc;

  // bh: max number of branches along a root-to-leaf chain of a pendant tree
  std::vector<int> bdepth(size_t(n), 0);
  for (int v : order) {
    int p = d.parent[size_t(v)];
    int up = d.is_core[size_t(p)] ? 0 : bdepth[size_t(p)];
    bdepth[size_t(v)] = up + (is_branch[size_t(v)] ? 1 : 0);
    d.bh = std::max(d.bh, bdepth[size_t(v)]);
  }

  // classify edges
  d.edge_class.clear();
  for (const auto& e : g.core_edges) {
    if (!d.is_core[size_t(e.u)] || !d.is_core[size_t(e.v)])
      throw std::invalid_argument("declared core edge leaves the core");
    d.edge_class.push_back(0);
  }
  for (const auto& e : g.noncore_edges) {
    if (d.is_core[size_t(e.u)] && d.is_core[size_t(e.v)])
      throw std::invalid_argument("declared non-core edge joins two core vertices");
    if (!d.is_core[size_t(e.v)] && d.parent[size_t(e.v)] != e.u)
      throw std::invalid_argument("non-core edge not directed parent->child");
    d.edge_class.push_back(d.is_internal[size_t(e.v)] ? 1 : 2);
  }
  return d;
}

}  // namespace molinfer
