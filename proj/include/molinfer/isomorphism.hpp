#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "molinfer/graph.hpp"

namespace molinfer {

namespace detail {

struct LabeledView {
  int n = 0;
  std::vector<int> vlabel;
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, beta)

  explicit LabeledView(const ChemicalGraph& g) : n(g.n()), vlabel(g.alpha), adj(g.adjacency()) {
    for (auto& row : adj) std::sort(row.begin(), row.end());
  }

  int edge(int u, int v) const {
    for (auto [w, b] : adj[size_t(u)])
      if (w == v) return b;
    return 0;
  }
};

// One round of color refinement; returns true if the partition got finer.
inline bool refine_once(const LabeledView& g, std::vector<int>& color) {
  std::vector<std::pair<std::vector<long long>, int>> sig(size_t(g.n));
  for (int v = 0; v < g.n; ++v) {
    std::vector<long long> s;
    s.push_back(color[size_t(v)]);
    std::vector<long long> nb;
    for (auto [w, b] : g.adj[size_t(v)]) nb.push_back(1000003LL * color[size_t(w)] + b);
    std::sort(nb.begin(), nb.end());
    s.insert(s.end(), nb.begin(), nb.end());
    sig[size_t(v)] = {std::move(s), v};
  }
  auto sorted = sig;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> next(size_t(g.n));
  int classes = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i].first != sorted[i - 1].first) ++classes;
    next[size_t(sorted[i].second)] = classes;
  }
  bool finer = false;
  {
    int before = 1 + *std::max_element(color.begin(), color.end());
    if (classes + 1 != before) finer = true;
    else {
      // same class count: refined iff the partition changed
      std::map<int, int> m;
      for (int v = 0; v < g.n; ++v) {
        auto it = m.find(color[size_t(v)]);
        if (it == m.end()) m[color[size_t(v)]] = next[size_t(v)];
        else if (it->second != next[size_t(v)]) { finer = true; break; }
      }
    }
  }
  color = std::move(next);
  return finer;
}

inline void refine(const LabeledView& g, std::vector<int>& color) {
  while (refine_once(g, color)) {}
}

inline std::string code_for_order(const LabeledView& g, const std::vector<int>& order) {
  std::vector<int> pos(size_t(g.n));
  for (int i = 0; i < g.n; ++i) pos[size_t(order[size_t(i)])] = i;
  std::string out;
  out.reserve(size_t(g.n) * 4);
  for (int i = 0; i < g.n; ++i) {
    out += char('A' + (g.vlabel[size_t(order[size_t(i)])] % 26));
    out += std::to_string(g.vlabel[size_t(order[size_t(i)])]);
    out += ';';
  }
  for (int i = 0; i < g.n; ++i) {
    std::vector<std::pair<int, int>> row;
    for (auto [w, b] : g.adj[size_t(order[size_t(i)])])
      if (pos[size_t(w)] < i) row.push_back({pos[size_t(w)], b});
    std::sort(row.begin(), row.end());
    for (auto [p, b] : row) {
      out += std::to_string(p);
      out += ':';
      out += std::to_string(b);
      out += ',';
    }
    out += '|';
  }
  return out;
}

// Canonical labeling by refinement plus branching on the smallest non-trivial
// cell, taking the lexicographically least adjacency encoding.
inline void canon_search(const LabeledView& g, std::vector<int> color, std::string& best) {
  refine(g, color);
  int ncell = -1, target = -1;
  std::vector<int> count(size_t(g.n) + 1, 0);
  for (int v = 0; v < g.n; ++v) count[size_t(color[size_t(v)])]++;
  for (int c = 0; c <= g.n; ++c)
    if (count[size_t(c)] > 1) { target = c; break; }
  (void)ncell;
  if (target < 0) {
    std::vector<int> order(size_t(g.n));
    std::vector<std::pair<int, int>> cv;
    for (int v = 0; v < g.n; ++v) cv.push_back({color[size_t(v)], v});
    std::sort(cv.begin(), cv.end());
    for (int i = 0; i < g.n; ++i) order[size_t(i)] = cv[size_t(i)].second;
    std::string code = code_for_order(g, order);
    if (best.empty() || code < best) best = code;
    return;
  }
  for (int v = 0; v < g.n; ++v) {
    if (color[size_t(v)] != target) continue;
    auto branched = color;
    for (int w = 0; w < g.n; ++w)
      branched[size_t(w)] = 2 * branched[size_t(w)] + (w == v ? 1 : 0);
    // renumber compactly
    std::map<int, int> remap;
    for (int w = 0; w < g.n; ++w) remap.emplace(branched[size_t(w)], 0);
    int k = 0;
    for (auto& [key, val] : remap) val = k++;
    for (int w = 0; w < g.n; ++w) branched[size_t(w)] = remap[branched[size_t(w)]];
    canon_search(g, branched, best);
  }
}

}  // namespace detail

// Canonical byte string, equal iff the labeled graphs are isomorphic.
inline std::string canonical_code(const ChemicalGraph& g) {
  detail::LabeledView view(g);
  std::vector<int> color(size_t(view.n), 0);
  {
    // initial colors from vertex labels, compact
    std::map<int, int> remap;
    for (int v = 0; v < view.n; ++v) remap.emplace(view.vlabel[size_t(v)], 0);
    int k = 0;
    for (auto& [key, val] : remap) val = k++;
    for (int v = 0; v < view.n; ++v) color[size_t(v)] = remap[view.vlabel[size_t(v)]];
  }
  std::string best;
  detail::canon_search(view, color, best);
  return best;
}

// Backtracking isomorphism test with label/degree pruning.
inline bool graphs_isomorphic(const ChemicalGraph& a, const ChemicalGraph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  detail::LabeledView ga(a), gb(b);
  std::vector<int> ca(size_t(ga.n), 0), cb(size_t(gb.n), 0);
  {
    std::map<int, int> remap;
    for (int v = 0; v < ga.n; ++v) remap.emplace(ga.vlabel[size_t(v)], 0);
    for (int v = 0; v < gb.n; ++v) remap.emplace(gb.vlabel[size_t(v)], 0);
    int k = 0;
    for (auto& [key, val] : remap) val = k++;
    for (int v = 0; v < ga.n; ++v) ca[size_t(v)] = remap[ga.vlabel[size_t(v)]];
    for (int v = 0; v < gb.n; ++v) cb[size_t(v)] = remap[gb.vlabel[size_t(v)]];
  }
  detail::refine(ga, ca);
  detail::refine(gb, cb);
  // class size histograms must agree after parallel refinement rounds;
  // refinement is order-independent so compare sorted signatures instead
  auto hist = [](const std::vector<int>& c) {
    std::vector<int> h(c.size() + 1, 0);
    for (int x : c) h[size_t(x)]++;
    std::sort(h.begin(), h.end());
    return h;
  };
  // correspondence of refined colors cannot be assumed between the two runs;
  // fall back to degree+label pruning in the matcher itself
  if (hist(ca) != hist(cb)) return false;

  std::vector<int> map(size_t(ga.n), -1), rmap(size_t(gb.n), -1);
  std::vector<int> order(size_t(ga.n));
  for (int i = 0; i < ga.n; ++i) order[size_t(i)] = i;
  // match high-degree vertices first
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return ga.adj[size_t(x)].size() > ga.adj[size_t(y)].size();
  });
  std::function<bool(size_t)> rec = [&](size_t k) -> bool {
    if (k == order.size()) return true;
    int u = order[k];
    for (int v = 0; v < gb.n; ++v) {
      if (rmap[size_t(v)] >= 0) continue;
      if (ga.vlabel[size_t(u)] != gb.vlabel[size_t(v)]) continue;
      if (ga.adj[size_t(u)].size() != gb.adj[size_t(v)].size()) continue;
      bool ok = true;
      for (auto [w, bt] : ga.adj[size_t(u)])
        if (map[size_t(w)] >= 0 && gb.edge(v, map[size_t(w)]) != bt) { ok = false; break; }
      if (ok)
        for (auto [w2, bt2] : gb.adj[size_t(v)])
          if (rmap[size_t(w2)] >= 0 && ga.edge(u, rmap[size_t(w2)]) != bt2) { ok = false; break; }
      if (!ok) continue;
      map[size_t(u)] = v;
      rmap[size_t(v)] = u;
      if (rec(k + 1)) return true;
      map[size_t(u)] = -1;
      rmap[size_t(v)] = -1;
    }
    return false;
  };
  if (!rec(0)) return false;
  // full verification of the found mapping
  for (int u = 0; u < ga.n; ++u)
    for (auto [w, bt] : ga.adj[size_t(u)])
      if (gb.edge(map[size_t(u)], map[size_t(w)]) != bt) return false;
  return true;
}

}  // namespace molinfer
