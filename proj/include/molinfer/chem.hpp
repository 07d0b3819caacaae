#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace molinfer {

// A chemical element in the hydrogen-suppressed model.  mass_star is
// floor(10 * atomic mass); every element carries one fixed valence in [1,4].
struct Element {
  std::string symbol;
  int valence = 0;
  int mass_star = 0;
};

// Registry of elements in use.  Ids are indices; ordering follows the total
// order by mass so that derived encodings are deterministic.
class ElementTable {
 public:
  ElementTable() = default;

  static ElementTable builtin() {
    ElementTable t;
    t.add({"C", 4, 120});
    t.add({"N", 3, 140});
    t.add({"O", 2, 159});
    t.add({"S", 2, 320});
    t.add({"P", 3, 309});
    return t;
  }

  int add(const Element& e) {
    if (e.symbol.empty()) throw std::invalid_argument("element symbol empty");
    if (e.valence < 1 || e.valence > 4)
      throw std::invalid_argument("element valence out of [1,4]: " + e.symbol);
    if (e.mass_star <= 0) throw std::invalid_argument("element mass_star <= 0: " + e.symbol);
    auto it = by_symbol_.find(e.symbol);
    if (it != by_symbol_.end()) {
      const Element& old = elems_[it->second];
      if (old.valence != e.valence || old.mass_star != e.mass_star)
        throw std::invalid_argument("conflicting redefinition of element " + e.symbol);
      return it->second;
    }
    elems_.push_back(e);
    by_symbol_[e.symbol] = int(elems_.size()) - 1;
    return int(elems_.size()) - 1;
  }

  int id(const std::string& symbol) const {
    auto it = by_symbol_.find(symbol);
    if (it == by_symbol_.end()) throw std::out_of_range("unknown element: " + symbol);
    return it->second;
  }
  std::optional<int> find(const std::string& symbol) const {
    auto it = by_symbol_.find(symbol);
    if (it == by_symbol_.end()) return std::nullopt;
    return it->second;
  }
  const Element& operator[](int i) const { return elems_.at(size_t(i)); }
  int size() const { return int(elems_.size()); }
  int valence(int i) const { return (*this)[i].valence; }
  int mass_star(int i) const { return (*this)[i].mass_star; }
  const std::string& symbol(int i) const { return (*this)[i].symbol; }

  // mass order, ties by symbol; this is the paper-facing "<" on elements
  bool less(int a, int b) const {
    const Element &x = (*this)[a], &y = (*this)[b];
    if (x.mass_star != y.mass_star) return x.mass_star < y.mass_star;
    return x.symbol < y.symbol;
  }

 private:
  std::vector<Element> elems_;
  std::map<std::string, int> by_symbol_;
};

// Chemical symbol: element with its (hydrogen-suppressed) degree, e.g. C3.
struct ChemSym {
  int elem = -1;
  int deg = 0;
  friend bool operator==(const ChemSym&, const ChemSym&) = default;
  friend auto operator<=>(const ChemSym&, const ChemSym&) = default;  // raw; use SymLess for chemistry order
};

inline std::string sym_str(const ElementTable& t, ChemSym s) {
  return t.symbol(s.elem) + std::to_string(s.deg);
}

// Total order over symbols: element mass first, then degree.
struct SymLess {
  const ElementTable* t;
  bool operator()(ChemSym a, ChemSym b) const {
    if (a.elem != b.elem) return t->less(a.elem, b.elem);
    return a.deg < b.deg;
  }
};

// Edge-configuration (mu, xi, m): the two endpoint symbols plus bond
// multiplicity.  Core-edge configurations are kept with mu <= xi.
struct EdgeConfig {
  ChemSym mu, xi;
  int mult = 1;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
  friend auto operator<=>(const EdgeConfig&, const EdgeConfig&) = default;
};

inline EdgeConfig reversed(const EdgeConfig& g) { return {g.xi, g.mu, g.mult}; }

inline std::string config_str(const ElementTable& t, const EdgeConfig& g) {
  return "(" + sym_str(t, g.mu) + "," + sym_str(t, g.xi) + "," + std::to_string(g.mult) + ")";
}

struct ConfigLess {
  const ElementTable* t;
  bool operator()(const EdgeConfig& a, const EdgeConfig& b) const {
    SymLess sl{t};
    if (a.mu != b.mu) return sl(a.mu, b.mu);
    if (a.xi != b.xi) return sl(a.xi, b.xi);
    return a.mult < b.mult;
  }
};

// Adjacency-configuration (a, b, m): element pair plus multiplicity, the
// coarsening of an edge-configuration.
struct AdjConfig {
  int a = -1, b = -1;
  int mult = 1;
  friend bool operator==(const AdjConfig&, const AdjConfig&) = default;
  friend auto operator<=>(const AdjConfig&, const AdjConfig&) = default;
};

inline AdjConfig adj_of(const EdgeConfig& g) { return {g.mu.elem, g.xi.elem, g.mult}; }
inline AdjConfig adj_reversed(const AdjConfig& v) { return {v.b, v.a, v.mult}; }

inline std::string adj_str(const ElementTable& t, const AdjConfig& v) {
  return "(" + t.symbol(v.a) + "," + t.symbol(v.b) + "," + std::to_string(v.mult) + ")";
}

struct AdjLess {
  const ElementTable* t;
  bool operator()(const AdjConfig& x, const AdjConfig& y) const {
    if (x.a != y.a) return t->less(x.a, y.a);
    if (x.b != y.b) return t->less(x.b, y.b);
    return x.mult < y.mult;
  }
};

// Normalize an unordered (core) configuration so mu <= xi in symbol order.
inline EdgeConfig normalized(const ElementTable& t, EdgeConfig g) {
  SymLess sl{&t};
  if (sl(g.xi, g.mu)) std::swap(g.mu, g.xi);
  return g;
}

// Feasibility of a configuration at both endpoints: an atom of degree i with
// one incident bond of multiplicity m needs m + (i-1) <= val(a), since the
// remaining i-1 neighbors take at least one valence unit each.
inline bool config_feasible(const ElementTable& t, const EdgeConfig& g) {
  return g.mult >= 1 && g.mult <= 3 && g.mu.deg >= 1 && g.xi.deg >= 1 &&
         g.mu.deg <= t.valence(g.mu.elem) && g.xi.deg <= t.valence(g.xi.elem) &&
         g.mult + g.mu.deg - 1 <= t.valence(g.mu.elem) &&
         g.mult + g.xi.deg - 1 <= t.valence(g.xi.elem);
}

}  // namespace molinfer
