#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace molinfer {

// The degree-bounded rooted tree T(a,b,c): the root has a children, every
// other internal vertex has b children, every leaf sits at depth c.  Vertices
// are indexed in BFS order.
struct Tabc {
  int a = 0, b = 2, c = 1;
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<int>> children;  // BFS-ordered
  std::vector<int> depth;
  std::vector<std::vector<int>> dsn;       // vertex indices per depth 0..c
  std::vector<int> leftmost;               // leftmost-path vertex per depth

  int n() const { return int(parent.size()); }
  int edges() const { return n() - 1; }
};

inline Tabc build_tabc(int a, int b, int c) {
  if (b < 2 || c < 1 || a < 0) throw std::invalid_argument("T(a,b,c) needs a>=0, b>=2, c>=1");
  Tabc t;
  t.a = a;
  t.b = b;
  t.c = c;
  t.parent.push_back(-1);
  t.depth.push_back(0);
  std::vector<int> frontier{0};
  for (int d = 0; d < c; ++d) {
    std::vector<int> next;
    for (int p : frontier) {
      int k = d == 0 ? a : b;
      for (int i = 0; i < k; ++i) {
        t.parent.push_back(p);
        t.depth.push_back(d + 1);
        next.push_back(int(t.parent.size()) - 1);
      }
    }
    frontier = std::move(next);
  }
  t.children.assign(t.parent.size(), {});
  for (size_t v = 1; v < t.parent.size(); ++v) t.children[size_t(t.parent[v])].push_back(int(v));
  t.dsn.assign(size_t(c) + 1, {});
  for (size_t v = 0; v < t.parent.size(); ++v) t.dsn[size_t(t.depth[v])].push_back(int(v));
  t.leftmost.assign(size_t(c) + 1, 0);
  int cur = 0;
  for (int d = 1; d <= c; ++d) {
    if (t.children[size_t(cur)].empty()) break;
    cur = t.children[size_t(cur)][0];
    t.leftmost[size_t(d)] = cur;
  }
  return t;
}

// Proper set of ordered index pairs (i,j): a subtree may contain v_j only if
// it contains v_i.  Built from three pair families: parent-to-first-child,
// consecutive siblings, and same-position children of consecutive sibling
// parents.  Reproduces the published sets for (1,2,2), (2,2,2), (2,3,2) and
// (3,3,2).
inline std::vector<std::pair<int, int>> proper_set(const Tabc& t) {
  std::vector<std::pair<int, int>> pairs;
  // leftmost descendant of v at depth offset k
  auto lmdesc = [&](int v, int k) {
    int cur = v;
    for (int i = 0; i < k && !t.children[size_t(cur)].empty(); ++i)
      cur = t.children[size_t(cur)][0];
    return cur;
  };
  // descendants of v at depth offset k
  std::function<void(int, int, std::vector<int>&)> desc = [&](int v, int k, std::vector<int>& out) {
    if (k == 0) {
      out.push_back(v);
      return;
    }
    for (int c : t.children[size_t(v)]) desc(c, k - 1, out);
  };
  for (int v = 0; v < t.n(); ++v) {
    const auto& ch = t.children[size_t(v)];
    if (!ch.empty()) pairs.push_back({v, ch[0]});
    for (size_t i = 0; i + 1 < ch.size(); ++i) {
      int x = ch[i], y = ch[i + 1];
      pairs.push_back({x, y});
      // children of depth-(c-1) siblings are structureless leaves; tie their
      // counts position by position
      if (t.depth[size_t(x)] + 1 == t.c) {
        const auto& c1 = t.children[size_t(x)];
        const auto& c2 = t.children[size_t(y)];
        for (size_t k = 0; k < std::min(c1.size(), c2.size()); ++k)
          pairs.push_back({c1[k], c2[k]});
      }
      // deeper structure ties: any depth reached inside the right sibling
      // must already be reached on the left sibling's leftmost path
      for (int k = 1; t.depth[size_t(x)] + k <= t.c; ++k) {
        std::vector<int> right;
        desc(y, k, right);
        int lm = lmdesc(x, k);
        for (int u : right) pairs.push_back({lm, u});
      }
    }
  }
  // drop pairs already implied transitively by the rest; this keeps the
  // published depth-2 sets byte-exact
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  {
    int n = t.n();
    auto closure_reaches = [&](const std::vector<std::pair<int, int>>& ps, size_t skip, int from,
                               int to) {
      std::vector<std::vector<char>> reach(size_t(n), std::vector<char>(size_t(n), 0));
      for (size_t i = 0; i < ps.size(); ++i)
        if (i != skip) reach[size_t(ps[i].first)][size_t(ps[i].second)] = 1;
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          if (reach[size_t(i)][size_t(k)])
            for (int j = 0; j < n; ++j)
              if (reach[size_t(k)][size_t(j)]) reach[size_t(i)][size_t(j)] = 1;
      return bool(reach[size_t(from)][size_t(to)]);
    };
    for (size_t i = 0; i < pairs.size();) {
      if (closure_reaches(pairs, i, pairs[i].first, pairs[i].second))
        pairs.erase(pairs.begin() + long(i));
      else
        ++i;
    }
  }
  return pairs;
}

inline std::vector<std::pair<int, int>> proper_set(int a, int b, int c) {
  return proper_set(build_tabc(a, b, c));
}

}  // namespace molinfer
