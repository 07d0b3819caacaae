#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "molinfer/chem.hpp"
#include "molinfer/descriptors.hpp"
#include "molinfer/graph.hpp"
#include "molinfer/structure.hpp"

namespace molinfer {

// Strata of the frequency-vector domain Sigma: the branch-core counter plus
// the three tagged edge-configuration families.
enum class Strat : std::uint8_t { Tbc = 0, Co = 1, In = 2, Ex = 3 };

struct SigKey {
  Strat strat = Strat::Tbc;
  EdgeConfig cfg{};  // ignored for Tbc
  friend bool operator==(const SigKey&, const SigKey&) = default;
  friend auto operator<=>(const SigKey&, const SigKey&) = default;
};

inline SigKey key_tbc() { return SigKey{Strat::Tbc, {}}; }
inline SigKey key_co(const EdgeConfig& g) { return SigKey{Strat::Co, g}; }
inline SigKey key_in(const EdgeConfig& g) { return SigKey{Strat::In, g}; }
inline SigKey key_ex(const EdgeConfig& g) { return SigKey{Strat::Ex, g}; }

inline std::string key_str(const ElementTable& t, const SigKey& k) {
  switch (k.strat) {
    case Strat::Tbc: return "tbc";
    case Strat::Co: return config_str(t, k.cfg) + "co";
    case Strat::In: return config_str(t, k.cfg) + "in";
    default: return config_str(t, k.cfg) + "ex";
  }
}

// Sparse non-negative integer vector over Sigma.  Zero entries are never
// stored, so map equality is vector equality.
struct FrequencyVector {
  std::map<SigKey, int> entries;

  int at(const SigKey& k) const {
    auto it = entries.find(k);
    return it == entries.end() ? 0 : it->second;
  }
  void add(const SigKey& k, int delta) {
    if (delta == 0) return;
    auto it = entries.find(k);
    int v = (it == entries.end() ? 0 : it->second) + delta;
    if (v < 0) throw std::domain_error("frequency entry went negative");
    if (v == 0) {
      if (it != entries.end()) entries.erase(it);
    } else if (it == entries.end()) {
      entries.emplace(k, v);
    } else {
      it->second = v;
    }
  }
  int tbc() const { return at(key_tbc()); }

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;

  friend FrequencyVector operator+(FrequencyVector a, const FrequencyVector& b) {
    for (auto& [k, v] : b.entries) a.add(k, v);
    return a;
  }

  // entrywise a <= b
  bool leq(const FrequencyVector& b) const {
    for (auto& [k, v] : entries)
      if (v > b.at(k)) return false;
    return true;
  }

  // b - this, or nullopt if any entry would go negative
  std::optional<FrequencyVector> complement_in(const FrequencyVector& b) const {
    FrequencyVector r = b;
    for (auto& [k, v] : entries) {
      if (r.at(k) < v) return std::nullopt;
      r.add(k, -v);
    }
    return r;
  }

  // Lexicographic over the ordered key domain, missing entries read as 0.
  // Total order used for the sorted pairing merge.
  friend bool operator<(const FrequencyVector& a, const FrequencyVector& b) {
    auto ia = a.entries.begin(), ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
      if (ia->first != ib->first) {
        // the smaller key has a positive entry on one side, zero on the other
        return ia->first < ib->first ? false : true;
      }
      if (ia->second != ib->second) return ia->second < ib->second;
      ++ia; ++ib;
    }
    if (ia != a.entries.end()) return false;  // a has extra positive entry
    return ib != b.entries.end();
  }

  std::string str(const ElementTable& t) const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [k, v] : entries) {
      if (!first) os << " ";
      first = false;
      os << key_str(t, k) << ":" << v;
    }
    os << "}";
    return os.str();
  }
};

// Chemical tree with node 0 as terminal r1; bi-rooted when r2 != 0, with the
// backbone being the tree path from 0 down to r2.  Parent pointers face r1.
struct RootedTree {
  struct Node {
    int elem = -1;
    int parent = -1;  // -1 for node 0
    int beta = 0;     // multiplicity of edge to parent
  };
  std::vector<Node> nodes;
  int r2 = 0;
  bool nc = true;  // nc-tree (pendant path) vs c-tree (core backbone)

  int n() const { return int(nodes.size()); }

  std::vector<int> degrees() const {
    std::vector<int> d(nodes.size(), 0);
    for (size_t i = 1; i < nodes.size(); ++i) {
      d[i]++;
      d[size_t(nodes[i].parent)]++;
    }
    return d;
  }

  std::vector<int> beta_sums() const {
    std::vector<int> b(nodes.size(), 0);
    for (size_t i = 1; i < nodes.size(); ++i) {
      b[i] += nodes[i].beta;
      b[size_t(nodes[i].parent)] += nodes[i].beta;
    }
    return b;
  }

  std::vector<char> backbone_mask() const {
    std::vector<char> m(nodes.size(), 0);
    int v = r2;
    while (v != -1) {
      m[size_t(v)] = 1;
      v = nodes[size_t(v)].parent;
    }
    return m;
  }

  int backbone_length() const {
    int len = 0, v = r2;
    while (v != 0) {
      ++len;
      v = nodes[size_t(v)].parent;
    }
    return len;
  }

  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> c(nodes.size());
    for (size_t i = 1; i < nodes.size(); ++i) c[size_t(nodes[i].parent)].push_back(int(i));
    return c;
  }

  // heights of every node within the tree rooted at r1
  std::vector<int> heights() const {
    std::vector<int> h(nodes.size(), 0);
    for (size_t i = nodes.size(); i-- > 1;)  // children have larger indices by construction
      h[size_t(nodes[i].parent)] = std::max(h[size_t(nodes[i].parent)], h[i] + 1);
    return h;
  }

  ChemicalGraph to_graph_all_noncore() const {
    ChemicalGraph g;
    for (auto& nd : nodes) g.add_vertex(nd.elem);
    for (size_t i = 1; i < nodes.size(); ++i)
      g.add_noncore_edge(nodes[i].parent, int(i), nodes[i].beta);
    return g;
  }
};

namespace detail {

// Per-F-tree branch classification for a c-tree: marks rho-internal nodes,
// checks the at-most-one-branch condition, reports the F-tree height.
struct FTreeInfo {
  int height = 0;
  int branches = 0;
};

}  // namespace detail

// f(T) for an nc-tree or c-tree, with optional terminal degree overrides
// implementing the fictitious relabelings (the override adds Delta to the
// terminal's degree everywhere its symbol appears).
inline FrequencyVector tree_frequency_vector(const RootedTree& T, int rho,
                                             const ElementTable& t,
                                             int delta1 = 0, int delta2 = 0) {
  if (rho < 1) throw std::invalid_argument("rho must be >= 1");
  for (int i = 1; i < T.n(); ++i)
    if (T.nodes[size_t(i)].parent >= i)
      throw std::logic_error("RootedTree nodes not in topological order");
  auto deg = T.degrees();
  if (delta1 != 0) {
    int d = deg[0] + delta1;
    if (d > 4 || d > t.valence(T.nodes[0].elem))
      throw std::invalid_argument("fictitious degree exceeds valence at r1");
    deg[0] = d;
  }
  if (delta2 != 0) {
    if (T.r2 == 0) throw std::invalid_argument("delta2 given for a rooted tree");
    int d = deg[size_t(T.r2)] + delta2;
    if (d > 4 || d > t.valence(T.nodes[size_t(T.r2)].elem))
      throw std::invalid_argument("fictitious degree exceeds valence at r2");
    deg[size_t(T.r2)] = d;
  }
  auto bb = T.backbone_mask();
  auto ch = T.children();
  FrequencyVector f;

  if (T.nc) {
    // backbone edges internal, everything else external; heights of hanging
    // trees must stay within rho
    auto hs = T.heights();
    for (int v = 0; v < T.n(); ++v) {
      if (bb[size_t(v)]) continue;
      int p = T.nodes[size_t(v)].parent;
      if (bb[size_t(p)] && hs[size_t(v)] + 1 > rho)
        throw std::invalid_argument("nc-tree has a hanging tree of height > rho");
    }
    for (int v = 1; v < T.n(); ++v) {
      int p = T.nodes[size_t(v)].parent;
      EdgeConfig c{{T.nodes[size_t(p)].elem, deg[size_t(p)]},
                   {T.nodes[size_t(v)].elem, deg[size_t(v)]},
                   T.nodes[size_t(v)].beta};
      f.add(bb[size_t(v)] && bb[size_t(p)] ? key_in(c) : key_ex(c), 1);
    }
    return f;
  }

  // c-tree: backbone is core; classify each F-tree hanging at a backbone
  // vertex by its own branch structure
  std::vector<char> internal(size_t(T.n()), 0);
  int tbc = 0;
  std::vector<int> hloc(size_t(T.n()), 0);  // height within own F-tree
  for (size_t i = T.nodes.size(); i-- > 1;) {
    if (bb[i]) continue;
    size_t p = size_t(T.nodes[i].parent);
    if (!bb[p]) hloc[p] = std::max(hloc[p], hloc[i] + 1);
  }
  // find branches per F-tree: non-backbone v with hloc == rho is a leaf
  // branch; >=2 children of height >= rho would be a non-leaf branch
  std::vector<char> is_branch(size_t(T.n()), 0);
  std::vector<int> ftree_branches(size_t(T.n()), 0);  // indexed by backbone root
  std::vector<int> froot(size_t(T.n()), -1);
  for (int v = 0; v < T.n(); ++v) {
    if (bb[size_t(v)]) { froot[size_t(v)] = v; continue; }
    int p = T.nodes[size_t(v)].parent;
    froot[size_t(v)] = bb[size_t(p)] ? p : froot[size_t(p)];
  }
  for (int v = 0; v < T.n(); ++v) {
    if (bb[size_t(v)]) continue;
    if (hloc[size_t(v)] == rho) is_branch[size_t(v)] = 1;
    int big = 0;
    for (int c : ch[size_t(v)])
      if (!bb[size_t(c)] && hloc[size_t(c)] >= rho) ++big;
    if (big >= 2) is_branch[size_t(v)] = 1;
    if (is_branch[size_t(v)]) ftree_branches[size_t(froot[size_t(v)])]++;
  }
  for (int v = 0; v < T.n(); ++v)
    if (bb[size_t(v)] && ftree_branches[size_t(v)] > 1)
      throw std::invalid_argument("c-tree F-tree contains more than one rho-branch");
  // internal: non-backbone vertices with a branch in their inclusive subtree
  for (size_t i = T.nodes.size(); i-- > 1;) {
    if (bb[i]) continue;
    if (is_branch[i]) internal[i] = 1;
    for (int c : ch[i])
      if (!bb[size_t(c)] && internal[size_t(c)]) internal[i] = 1;
  }
  for (int v = 0; v < T.n(); ++v)
    if (bb[size_t(v)]) {
      // F-tree of height > rho contributes one branch-core vertex
      int hmax = 0;
      for (int c : ch[size_t(v)])
        if (!bb[size_t(c)]) hmax = std::max(hmax, hloc[size_t(c)] + 1);
      if (hmax > rho) ++tbc;
    }

  for (int v = 1; v < T.n(); ++v) {
    int p = T.nodes[size_t(v)].parent;
    EdgeConfig c{{T.nodes[size_t(p)].elem, deg[size_t(p)]},
                 {T.nodes[size_t(v)].elem, deg[size_t(v)]},
                 T.nodes[size_t(v)].beta};
    if (bb[size_t(v)] && bb[size_t(p)]) {
      f.add(key_co(normalized(t, c)), 1);
    } else if (internal[size_t(v)]) {
      f.add(key_in(c), 1);
    } else {
      f.add(key_ex(c), 1);
    }
  }
  if (tbc) f.add(key_tbc(), tbc);
  return f;
}

inline FrequencyVector fictitious_frequency(const RootedTree& T, int rho,
                                            const ElementTable& t, int delta1,
                                            std::optional<int> delta2 = std::nullopt) {
  if (delta1 < 1 || delta1 > 4) throw std::invalid_argument("delta1 outside [1,4]");
  if (delta2) {
    if (*delta2 < 1 || *delta2 > 3) throw std::invalid_argument("delta2 outside [1,3]");
    if (T.nc) throw std::invalid_argument("two-terminal fictitious tree requires a c-tree");
    if (T.r2 == 0) throw std::invalid_argument("delta2 requires distinct terminals");
  }
  return tree_frequency_vector(T, rho, t, delta1, delta2 ? *delta2 : 0);
}

// f-hat of a full rho-lean cyclic graph: same entries as the feature vector's
// ec families plus the branch-core count.
inline FrequencyVector graph_frequency_vector(const ChemicalGraph& g, int rho,
                                              const ElementTable& t) {
  RhoDecomposition d = rho_decompose(g, rho);
  auto deg = g.degrees();
  FrequencyVector f;
  size_t ei = 0;
  for (const auto& e : g.core_edges) {
    (void)e;
    EdgeConfig c = edge_config(g, t, e.u, e.v, e.beta, true, deg);
    if (d.edge_class[ei++] != 0) throw std::logic_error("core edge misclassified");
    f.add(key_co(c), 1);
  }
  for (const auto& e : g.noncore_edges) {
    EdgeConfig c = edge_config(g, t, e.u, e.v, e.beta, false, deg);
    int cls = d.edge_class[ei++];
    f.add(cls == 1 ? key_in(c) : key_ex(c), 1);
  }
  if (d.bc) f.add(key_tbc(), d.bc);
  return f;
}

// Recovery of core-degree counts (z), core symbol counts (z') and non-core
// symbol counts (z'') from a full graph's frequency vector.  branch_info
// lists, per base vertex: element, deg_G(v), and Delta_v = deg in the base
// multigraph.
struct BaseVertexInfo {
  int elem = -1;
  int deg = 0;    // degree in G
  int delta = 0;  // degree in the base graph
};

struct DegreeRecovery {
  std::array<int, 4> z{};           // core-degree counts dg1..dg4
  std::map<ChemSym, int> z_co;      // core symbol counts
  std::map<ChemSym, int> z_nc;      // non-core symbol counts
};

inline DegreeRecovery degree_recovery(const FrequencyVector& w,
                                      const std::vector<BaseVertexInfo>& base) {
  DegreeRecovery r;
  std::array<int, 4> acc{};
  std::map<ChemSym, int> acc_sym;
  for (auto& [k, v] : w.entries) {
    if (k.strat == Strat::Co) {
      acc[size_t(k.cfg.mu.deg - 1)] += v;
      acc[size_t(k.cfg.xi.deg - 1)] += v;
      acc_sym[k.cfg.mu] += v;
      acc_sym[k.cfg.xi] += v;
    } else if (k.strat == Strat::In || k.strat == Strat::Ex) {
      r.z_nc[k.cfg.xi] += v;
    }
  }
  for (const auto& b : base) {
    acc[size_t(b.deg - 1)] -= b.delta - 2;
    acc_sym[ChemSym{b.elem, b.deg}] -= b.delta - 2;
  }
  for (int i = 0; i < 4; ++i) {
    if (acc[size_t(i)] % 2 != 0)
      throw std::domain_error("degree recovery: non-integral halving (inconsistent input)");
    r.z[size_t(i)] = acc[size_t(i)] / 2;
  }
  for (auto& [s, c] : acc_sym) {
    if (c % 2 != 0)
      throw std::domain_error("degree recovery: non-integral halving (inconsistent input)");
    if (c / 2 != 0) r.z_co[s] = c / 2;
  }
  return r;
}

}  // namespace molinfer
