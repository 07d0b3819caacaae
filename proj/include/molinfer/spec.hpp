#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "molinfer/chem.hpp"
#include "molinfer/descriptors.hpp"
#include "molinfer/rational.hpp"

namespace molinfer {

using json = nlohmann::json;

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EdgeKind { Ge2, Ge1, ZeroOne, Eq1 };

inline const char* kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Ge2: return "ge2";
    case EdgeKind::Ge1: return "ge1";
    case EdgeKind::ZeroOne: return "zero_one";
    default: return "eq1";
  }
}

struct SeedEdge {
  std::string id;
  int u = 0, v = 0;  // 0-based vertex indices, u < v
  EdgeKind kind = EdgeKind::Eq1;
};

// Multigraph template whose edges expand into the core.
struct SeedGraph {
  int n_vertices = 0;
  std::vector<SeedEdge> edges;

  int edge_index(const std::string& id) const {
    for (size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return int(i);
    throw SpecError("unknown seed edge id: " + id);
  }
  std::vector<int> edges_of_kind(EdgeKind k) const {
    std::vector<int> r;
    for (size_t i = 0; i < edges.size(); ++i)
      if (edges[i].kind == k) r.push_back(int(i));
    return r;
  }
};

struct Bounds {
  int lb = 0, ub = 0;
  bool contains(int x) const { return lb <= x && x <= ub; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct CoreSpec {
  std::vector<Bounds> ell;  // per seed edge; forced (0,1) / (1,1) for zero_one / eq1
  Bounds cs;
};

struct NonCoreSpec {
  int n_lb = 1;
  int n_star = 1;
  int rho = 2;
  int dg4_nc_ub = 0;
  std::vector<Bounds> ch_v, ch_e;  // per vertex / per seed edge
  std::vector<Bounds> bl_v, bl_e;
};

struct SideTerm {
  Rational coef;
  enum Kind { Ell, Bl, Na } kind = Ell;
  int edge = -1;
  int elem = -1;  // for Na
};

struct SideConstraint {
  std::vector<SideTerm> terms;
  int rel = -1;  // -1: <=, 0: ==, +1: >=
  Rational rhs;
};

struct ChemSpec {
  ElementTable table;
  std::vector<int> lambda, lambda_co, lambda_nc;
  std::vector<ChemSym> ldg_co, ldg_nc;
  std::vector<EdgeConfig> gamma_co, gamma_in, gamma_ex;  // gamma_co normalized
  std::vector<std::vector<int>> lambda_star;             // allowed elements per seed vertex

  std::map<int, Bounds> na, na_co, na_nc;                // keyed by element id
  std::map<ChemSym, Bounds> ns, ns_co, ns_nc;
  std::map<AdjConfig, Bounds> ac_co, ac_in, ac_ex;
  std::map<EdgeConfig, Bounds> ec_co, ec_in, ec_ex;
  std::vector<Bounds> bd2, bd3;                          // per seed edge
  std::array<Bounds, 4> dg{};                            // optional bounds on dg(d)

  std::vector<EdgeConfig> gamma_co_gt() const {
    std::vector<EdgeConfig> r;
    for (const auto& g : gamma_co)
      if (g.mu != g.xi) r.push_back(reversed(g));
    return r;
  }
  // directed membership: g or its reversal is a declared core configuration
  bool in_gamma_co_directed(const EdgeConfig& g) const {
    for (const auto& x : gamma_co)
      if (x == g || reversed(x) == g) return true;
    return false;
  }
  bool in(const std::vector<EdgeConfig>& set, const EdgeConfig& g) const {
    return std::find(set.begin(), set.end(), g) != set.end();
  }
  DescriptorAlphabet alphabet() const {
    return DescriptorAlphabet{ldg_co, ldg_nc, gamma_co, gamma_in, gamma_ex};
  }
};

struct TargetSpec {
  SeedGraph seed;
  CoreSpec core;
  NonCoreSpec noncore;
  ChemSpec chem;
  std::vector<SideConstraint> side;
  std::vector<int> vertex_permutation;  // original index -> normalized index

  Bounds ell(int e) const { return core.ell[size_t(e)]; }
  int rho() const { return noncore.rho; }
  int n_star() const { return noncore.n_star; }

  // index sets per edge kind, in seed order
  std::vector<int> it_edges() const { return seed.edges_of_kind(EdgeKind::Ge2); }
  std::vector<int> iw_edges() const { return seed.edges_of_kind(EdgeKind::Ge1); }
  std::vector<int> iz_edges() const { return seed.edges_of_kind(EdgeKind::ZeroOne); }
  std::vector<int> iew_edges() const { return seed.edges_of_kind(EdgeKind::Eq1); }
};

// ---------------------------------------------------------------------------
// parsing helpers

namespace specdetail {

inline ChemSym parse_sym(const ElementTable& t, const std::string& s) {
  size_t i = s.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
  if (i == 0 || i == s.size()) throw SpecError("bad chemical symbol: " + s);
  auto id = t.find(s.substr(0, i));
  if (!id) throw SpecError("unknown element in symbol: " + s);
  int deg = std::stoi(s.substr(i));
  if (deg < 1 || deg > 4) throw SpecError("symbol degree outside [1,4]: " + s);
  return ChemSym{*id, deg};
}

inline EdgeConfig parse_config(const ElementTable& t, const json& j) {
  if (!j.is_array() || j.size() != 3) throw SpecError("edge-configuration must be [mu, xi, m]");
  EdgeConfig g;
  g.mu = parse_sym(t, j[0].get<std::string>());
  g.xi = parse_sym(t, j[1].get<std::string>());
  g.mult = j[2].get<int>();
  if (g.mult < 1 || g.mult > 3) throw SpecError("bond multiplicity outside [1,3]");
  return g;
}

inline AdjConfig parse_adj(const ElementTable& t, const std::string& key) {
  std::istringstream is(key);
  std::string a, b;
  int m;
  if (!(is >> a >> b >> m)) throw SpecError("bad adjacency-configuration key: " + key);
  auto ia = t.find(a), ib = t.find(b);
  if (!ia || !ib) throw SpecError("unknown element in adjacency-configuration: " + key);
  return AdjConfig{*ia, *ib, m};
}

inline EdgeConfig parse_config_key(const ElementTable& t, const std::string& key) {
  std::istringstream is(key);
  std::string a, b;
  int m;
  if (!(is >> a >> b >> m)) throw SpecError("bad edge-configuration key: " + key);
  return EdgeConfig{parse_sym(t, a), parse_sym(t, b), m};
}

inline Bounds parse_bounds(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw SpecError(what + " bounds must be [lb, ub]");
  Bounds b{j[0].get<int>(), j[1].get<int>()};
  if (b.lb > b.ub) throw SpecError(what + ": lb > ub (" + std::to_string(b.lb) + " > " +
                                   std::to_string(b.ub) + ")");
  return b;
}

inline Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2)
    return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
  throw SpecError("rational must be an integer or [num, den]");
}

inline int vertex_index(const std::string& name, int n) {
  if (name.size() < 2 || name[0] != 'u') throw SpecError("bad vertex name: " + name);
  int k = std::stoi(name.substr(1));
  if (k < 1 || k > n) throw SpecError("vertex out of range: " + name);
  return k - 1;
}

}  // namespace specdetail

// ---------------------------------------------------------------------------

inline void validate_spec(const TargetSpec& s);

inline TargetSpec parse_spec(const json& doc) {
  using namespace specdetail;
  TargetSpec s;
  if (!doc.is_object()) throw SpecError("spec document must be a JSON object");
  for (auto& [k, v] : doc.items())
    if (k != "seed" && k != "core" && k != "noncore" && k != "chem" && k != "side")
      throw SpecError("unknown top-level key: " + k);

  // --- seed
  const json& jseed = doc.at("seed");
  s.seed.n_vertices = jseed.at("vertices").get<int>();
  if (s.seed.n_vertices < 1) throw SpecError("seed needs at least one vertex");
  std::set<std::string> ids;
  for (const json& je : jseed.at("edges")) {
    SeedEdge e;
    e.id = je.at("id").get<std::string>();
    if (!ids.insert(e.id).second) throw SpecError("duplicate edge id: " + e.id);
    e.u = je.at("u").get<int>() - 1;
    e.v = je.at("v").get<int>() - 1;
    std::string k = je.at("kind").get<std::string>();
    if (k == "ge2") e.kind = EdgeKind::Ge2;
    else if (k == "ge1") e.kind = EdgeKind::Ge1;
    else if (k == "zero_one") e.kind = EdgeKind::ZeroOne;
    else if (k == "eq1") e.kind = EdgeKind::Eq1;
    else throw SpecError("unknown edge kind: " + k);
    if (e.u < 0 || e.v < 0 || e.u >= s.seed.n_vertices || e.v >= s.seed.n_vertices)
      throw SpecError("edge endpoint out of range on " + e.id);
    if (e.u == e.v) throw SpecError("self-loop in seed graph on " + e.id);
    if (e.u > e.v) std::swap(e.u, e.v);
    s.seed.edges.push_back(e);
  }
  int mc = int(s.seed.edges.size());

  // --- core
  const json& jcore = doc.at("core");
  s.core.cs = parse_bounds(jcore.at("cs"), "cs");
  s.core.ell.resize(size_t(mc));
  for (int i = 0; i < mc; ++i) {
    const SeedEdge& e = s.seed.edges[size_t(i)];
    switch (e.kind) {
      case EdgeKind::ZeroOne: s.core.ell[size_t(i)] = {0, 1}; break;
      case EdgeKind::Eq1: s.core.ell[size_t(i)] = {1, 1}; break;
      default: {
        if (!jcore.contains("ell") || !jcore.at("ell").contains(e.id))
          throw SpecError("missing ell bounds for edge " + e.id);
        s.core.ell[size_t(i)] = parse_bounds(jcore.at("ell").at(e.id), "ell(" + e.id + ")");
      }
    }
  }

  // --- noncore
  const json& jnc = doc.at("noncore");
  Bounds nb = parse_bounds(jnc.at("n"), "n");
  s.noncore.n_lb = nb.lb;
  s.noncore.n_star = nb.ub;
  s.noncore.rho = jnc.value("rho", 2);
  if (s.noncore.rho < 1) throw SpecError("rho must be >= 1");
  s.noncore.dg4_nc_ub = jnc.value("dg4_nc_ub", 0);
  int nstar = s.noncore.n_star;
  s.noncore.ch_v.assign(size_t(s.seed.n_vertices), Bounds{0, nstar});
  s.noncore.ch_e.assign(size_t(mc), Bounds{0, nstar});
  if (jnc.contains("ch_v"))
    for (auto& [k, v] : jnc.at("ch_v").items())
      s.noncore.ch_v[size_t(vertex_index(k, s.seed.n_vertices))] = parse_bounds(v, "ch(" + k + ")");
  if (jnc.contains("ch_e"))
    for (auto& [k, v] : jnc.at("ch_e").items())
      s.noncore.ch_e[size_t(s.seed.edge_index(k))] = parse_bounds(v, "ch(" + k + ")");
  // bl defaults: least restrictive consistent with the ch bounds
  s.noncore.bl_v.resize(size_t(s.seed.n_vertices));
  for (int i = 0; i < s.seed.n_vertices; ++i)
    s.noncore.bl_v[size_t(i)] =
        Bounds{s.noncore.ch_v[size_t(i)].lb > s.noncore.rho ? 1 : 0,
               s.noncore.ch_v[size_t(i)].ub > s.noncore.rho ? 1 : 0};
  s.noncore.bl_e.resize(size_t(mc));
  for (int i = 0; i < mc; ++i) {
    bool can = s.noncore.ch_e[size_t(i)].ub > s.noncore.rho && s.core.ell[size_t(i)].ub >= 2;
    s.noncore.bl_e[size_t(i)] =
        Bounds{s.noncore.ch_e[size_t(i)].lb > s.noncore.rho ? 1 : 0,
               can ? std::max(0, s.core.ell[size_t(i)].ub - 1) : 0};
  }
  if (jnc.contains("bl_v"))
    for (auto& [k, v] : jnc.at("bl_v").items())
      s.noncore.bl_v[size_t(vertex_index(k, s.seed.n_vertices))] = parse_bounds(v, "bl(" + k + ")");
  if (jnc.contains("bl_e"))
    for (auto& [k, v] : jnc.at("bl_e").items())
      s.noncore.bl_e[size_t(s.seed.edge_index(k))] = parse_bounds(v, "bl(" + k + ")");
  // a pendant tree higher than rho necessarily carries a leaf branch; raise
  // implied lower bounds so the scheme sizing sees them
  for (int i = 0; i < s.seed.n_vertices; ++i)
    if (s.noncore.ch_v[size_t(i)].lb > s.noncore.rho && s.noncore.bl_v[size_t(i)].lb < 1)
      s.noncore.bl_v[size_t(i)].lb = 1;
  for (int i = 0; i < mc; ++i)
    if (s.noncore.ch_e[size_t(i)].lb > s.noncore.rho && s.noncore.bl_e[size_t(i)].lb < 1)
      s.noncore.bl_e[size_t(i)].lb = 1;

  // --- chem
  const json& jchem = doc.at("chem");
  s.chem.table = ElementTable::builtin();
  if (jchem.contains("elements"))
    for (const json& je : jchem.at("elements"))
      s.chem.table.add(Element{je.at("symbol").get<std::string>(), je.at("valence").get<int>(),
                               je.at("mass_star").get<int>()});
  auto elem_list = [&](const json& arr) {
    std::vector<int> r;
    for (const json& e : arr) r.push_back(s.chem.table.id(e.get<std::string>()));
    return r;
  };
  s.chem.lambda = elem_list(jchem.at("lambda"));
  s.chem.lambda_co = jchem.contains("lambda_co") ? elem_list(jchem.at("lambda_co")) : s.chem.lambda;
  s.chem.lambda_nc = jchem.contains("lambda_nc") ? elem_list(jchem.at("lambda_nc")) : s.chem.lambda;

  auto sym_list = [&](const json& arr) {
    std::vector<ChemSym> r;
    for (const json& e : arr) r.push_back(parse_sym(s.chem.table, e.get<std::string>()));
    std::sort(r.begin(), r.end(), SymLess{&s.chem.table});
    return r;
  };
  auto default_syms = [&](const std::vector<int>& elems, int dmin) {
    std::vector<ChemSym> r;
    for (int e : elems)
      for (int d = dmin; d <= std::min(4, s.chem.table.valence(e)); ++d) r.push_back({e, d});
    std::sort(r.begin(), r.end(), SymLess{&s.chem.table});
    return r;
  };
  s.chem.ldg_co = jchem.contains("ldg_co") ? sym_list(jchem.at("ldg_co"))
                                           : default_syms(s.chem.lambda_co, 2);
  s.chem.ldg_nc = jchem.contains("ldg_nc") ? sym_list(jchem.at("ldg_nc"))
                                           : default_syms(s.chem.lambda_nc, 1);

  auto config_list = [&](const json& arr, bool normalize) {
    std::vector<EdgeConfig> r;
    for (const json& e : arr) {
      EdgeConfig g = parse_config(s.chem.table, e);
      if (normalize) g = normalized(s.chem.table, g);
      r.push_back(g);
    }
    std::sort(r.begin(), r.end(), ConfigLess{&s.chem.table});
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  };
  auto default_gamma = [&](const std::vector<ChemSym>& syms, bool normalize, int dmin) {
    std::vector<EdgeConfig> r;
    for (const ChemSym& a : syms)
      for (const ChemSym& b : syms) {
        if (a.deg < dmin || b.deg < dmin) continue;
        if (normalize && SymLess{&s.chem.table}(b, a)) continue;
        for (int m = 1; m <= 3; ++m) {
          EdgeConfig g{a, b, m};
          if (config_feasible(s.chem.table, g)) r.push_back(g);
        }
      }
    std::sort(r.begin(), r.end(), ConfigLess{&s.chem.table});
    return r;
  };
  s.chem.gamma_co = jchem.contains("gamma_co") ? config_list(jchem.at("gamma_co"), true)
                                               : default_gamma(s.chem.ldg_co, true, 2);
  s.chem.gamma_in = jchem.contains("gamma_in") ? config_list(jchem.at("gamma_in"), false)
                                               : default_gamma(s.chem.ldg_nc, false, 2);
  s.chem.gamma_ex = jchem.contains("gamma_ex") ? config_list(jchem.at("gamma_ex"), false)
                                               : default_gamma(s.chem.ldg_nc, false, 1);

  s.chem.lambda_star.assign(size_t(s.seed.n_vertices), s.chem.lambda_co);
  if (jchem.contains("lambda_star"))
    for (auto& [k, v] : jchem.at("lambda_star").items())
      s.chem.lambda_star[size_t(vertex_index(k, s.seed.n_vertices))] = elem_list(v);

  auto bound_map_elem = [&](const char* key, std::map<int, Bounds>& out) {
    if (!jchem.contains(key)) return;
    for (auto& [k, v] : jchem.at(key).items())
      out[s.chem.table.id(k)] = parse_bounds(v, std::string(key) + "(" + k + ")");
  };
  bound_map_elem("na", s.chem.na);
  bound_map_elem("na_co", s.chem.na_co);
  bound_map_elem("na_nc", s.chem.na_nc);
  auto bound_map_sym = [&](const char* key, std::map<ChemSym, Bounds>& out) {
    if (!jchem.contains(key)) return;
    for (auto& [k, v] : jchem.at(key).items())
      out[parse_sym(s.chem.table, k)] = parse_bounds(v, std::string(key) + "(" + k + ")");
  };
  bound_map_sym("ns", s.chem.ns);
  bound_map_sym("ns_co", s.chem.ns_co);
  bound_map_sym("ns_nc", s.chem.ns_nc);
  auto bound_map_adj = [&](const char* key, std::map<AdjConfig, Bounds>& out) {
    if (!jchem.contains(key)) return;
    for (auto& [k, v] : jchem.at(key).items())
      out[parse_adj(s.chem.table, k)] = parse_bounds(v, std::string(key) + "(" + k + ")");
  };
  bound_map_adj("ac_co", s.chem.ac_co);
  bound_map_adj("ac_in", s.chem.ac_in);
  bound_map_adj("ac_ex", s.chem.ac_ex);
  auto bound_map_cfg = [&](const char* key, std::map<EdgeConfig, Bounds>& out, bool norm) {
    if (!jchem.contains(key)) return;
    for (auto& [k, v] : jchem.at(key).items()) {
      EdgeConfig g = parse_config_key(s.chem.table, k);
      if (norm) g = normalized(s.chem.table, g);
      out[g] = parse_bounds(v, std::string(key) + "(" + k + ")");
    }
  };
  bound_map_cfg("ec_co", s.chem.ec_co, true);
  bound_map_cfg("ec_in", s.chem.ec_in, false);
  bound_map_cfg("ec_ex", s.chem.ec_ex, false);

  s.chem.bd2.assign(size_t(mc), Bounds{0, nstar});
  s.chem.bd3.assign(size_t(mc), Bounds{0, nstar});
  if (jchem.contains("bd2"))
    for (auto& [k, v] : jchem.at("bd2").items())
      s.chem.bd2[size_t(s.seed.edge_index(k))] = parse_bounds(v, "bd2(" + k + ")");
  if (jchem.contains("bd3"))
    for (auto& [k, v] : jchem.at("bd3").items())
      s.chem.bd3[size_t(s.seed.edge_index(k))] = parse_bounds(v, "bd3(" + k + ")");
  for (int d = 0; d < 4; ++d) s.chem.dg[size_t(d)] = Bounds{0, nstar};
  if (jchem.contains("dg"))
    for (auto& [k, v] : jchem.at("dg").items()) {
      int d = std::stoi(k);
      if (d < 1 || d > 4) throw SpecError("dg bound degree outside [1,4]");
      s.chem.dg[size_t(d - 1)] = parse_bounds(v, "dg(" + k + ")");
    }

  // --- side constraints
  if (doc.contains("side"))
    for (const json& jc : doc.at("side")) {
      SideConstraint c;
      std::string op = jc.at("op").get<std::string>();
      c.rel = op == "<=" ? -1 : op == "==" ? 0 : op == ">=" ? 1 : 2;
      if (c.rel == 2) throw SpecError("side op must be <=, == or >=");
      c.rhs = parse_rational(jc.at("rhs"));
      for (const json& jt : jc.at("terms")) {
        SideTerm term;
        term.coef = parse_rational(jt.at("coef"));
        std::string kind = jt.at("kind").get<std::string>();
        term.edge = s.seed.edge_index(jt.at("edge").get<std::string>());
        if (kind == "ell") term.kind = SideTerm::Ell;
        else if (kind == "bl") term.kind = SideTerm::Bl;
        else if (kind == "na") {
          term.kind = SideTerm::Na;
          term.elem = s.chem.table.id(jt.at("elem").get<std::string>());
        } else {
          throw SpecError("side term kind must be ell, bl or na");
        }
        c.terms.push_back(term);
      }
      s.side.push_back(c);
    }

  // --- normalize vertex order: bl_UB = 1 vertices first
  {
    int n = s.seed.n_vertices;
    std::vector<int> perm(static_cast<size_t>(n));
    std::vector<int> order;
    for (int v = 0; v < n; ++v)
      if (s.noncore.bl_v[size_t(v)].ub >= 1) order.push_back(v);
    for (int v = 0; v < n; ++v)
      if (s.noncore.bl_v[size_t(v)].ub < 1) order.push_back(v);
    for (int i = 0; i < n; ++i) perm[size_t(order[size_t(i)])] = i;
    s.vertex_permutation = perm;
    bool identity = true;
    for (int v = 0; v < n; ++v)
      if (perm[size_t(v)] != v) identity = false;
    if (!identity) {
      auto permuted = [&](auto vec) {
        auto out = vec;
        for (int v = 0; v < n; ++v) out[size_t(perm[size_t(v)])] = vec[size_t(v)];
        return out;
      };
      s.noncore.ch_v = permuted(s.noncore.ch_v);
      s.noncore.bl_v = permuted(s.noncore.bl_v);
      s.chem.lambda_star = permuted(s.chem.lambda_star);
      for (auto& e : s.seed.edges) {
        e.u = perm[size_t(e.u)];
        e.v = perm[size_t(e.v)];
        if (e.u > e.v) std::swap(e.u, e.v);
      }
    }
  }

  validate_spec(s);
  return s;
}

inline TargetSpec parse_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("JSON parse failure: ") + e.what());
  }
  return parse_spec(doc);
}

// Validation of every cross-field invariant; each failure names the
// violated inequality.
inline void validate_spec(const TargetSpec& s) {
  const auto& t = s.chem.table;
  int mc = int(s.seed.edges.size());
  int rho = s.noncore.rho;
  auto fail = [](const std::string& msg) { throw SpecError("spec invariant violated: " + msg); };

  // core
  int min_core = s.seed.n_vertices;
  for (int i = 0; i < mc; ++i) {
    const SeedEdge& e = s.seed.edges[size_t(i)];
    const Bounds& l = s.core.ell[size_t(i)];
    if (e.kind == EdgeKind::Ge2 && l.lb < 2)
      fail("ell_LB(" + e.id + ") >= 2 required for a ge2 edge");
    if (e.kind == EdgeKind::Ge1 && (l.lb != 1 || l.ub < 2))
      fail("ge1 edge " + e.id + " requires ell_LB = 1 and ell_UB >= 2");
    if (e.kind == EdgeKind::Ge2 || e.kind == EdgeKind::Ge1) min_core += l.lb - 1;
  }
  if (s.core.cs.lb < min_core)
    fail("cs_LB >= |VC| + sum(ell_LB - 1) fails: " + std::to_string(s.core.cs.lb) + " < " +
         std::to_string(min_core));

  // noncore
  if (!(s.core.cs.lb <= s.noncore.n_lb && s.noncore.n_lb <= s.noncore.n_star))
    fail("cs_LB <= n_LB <= n* fails");
  for (int v = 0; v < s.seed.n_vertices; ++v) {
    const Bounds& bl = s.noncore.bl_v[size_t(v)];
    const Bounds& ch = s.noncore.ch_v[size_t(v)];
    if (bl.ub > 1) fail("bl_UB(u" + std::to_string(v + 1) + ") <= 1 required");
    if (ch.ub <= rho && bl.lb >= 1)
      fail("bl_LB(u" + std::to_string(v + 1) + ") >= 1 demands a branch but ch_UB <= rho");
  }
  for (int i = 0; i < mc; ++i) {
    const SeedEdge& e = s.seed.edges[size_t(i)];
    const Bounds& bl = s.noncore.bl_e[size_t(i)];
    const Bounds& ch = s.noncore.ch_e[size_t(i)];
    const Bounds& l = s.core.ell[size_t(i)];
    if (bl.ub > std::max(0, l.ub - 1))
      fail("bl_UB(" + e.id + ") <= ell_UB - 1 fails");
    if (ch.ub <= rho && bl.lb >= 1)
      fail("bl_LB(" + e.id + ") >= 1 demands a branch but ch_UB <= rho");
  }

  // chem
  auto in_elems = [&](const std::vector<int>& v, int e) {
    return std::find(v.begin(), v.end(), e) != v.end();
  };
  for (const ChemSym& m : s.chem.ldg_co) {
    if (m.deg < 2) fail("core symbol " + sym_str(t, m) + " has degree < 2");
    if (!in_elems(s.chem.lambda_co, m.elem))
      fail("core symbol " + sym_str(t, m) + " uses element outside Lambda_co");
    if (m.deg > t.valence(m.elem)) fail("symbol degree exceeds valence: " + sym_str(t, m));
  }
  for (const ChemSym& m : s.chem.ldg_nc) {
    if (!in_elems(s.chem.lambda_nc, m.elem))
      fail("non-core symbol " + sym_str(t, m) + " uses element outside Lambda_nc");
    if (m.deg > t.valence(m.elem)) fail("symbol degree exceeds valence: " + sym_str(t, m));
  }
  auto has_sym = [](const std::vector<ChemSym>& v, ChemSym x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (const EdgeConfig& g : s.chem.gamma_co) {
    if (SymLess{&t}(g.xi, g.mu)) fail("gamma_co not normalized: " + config_str(t, g));
    if (!has_sym(s.chem.ldg_co, g.mu) || !has_sym(s.chem.ldg_co, g.xi))
      fail("gamma_co uses symbol outside Ldg_co: " + config_str(t, g));
    if (!config_feasible(t, g)) fail("infeasible configuration: " + config_str(t, g));
  }
  for (const EdgeConfig& g : s.chem.gamma_in) {
    if (g.mu.deg < 2 || g.xi.deg < 2)
      fail("gamma_in configuration with a degree-1 endpoint: " + config_str(t, g));
    if (!has_sym(s.chem.ldg_nc, g.mu) || !has_sym(s.chem.ldg_nc, g.xi))
      fail("gamma_in uses symbol outside Ldg_nc: " + config_str(t, g));
    if (!config_feasible(t, g)) fail("infeasible configuration: " + config_str(t, g));
  }
  for (const EdgeConfig& g : s.chem.gamma_ex) {
    if (!has_sym(s.chem.ldg_nc, g.mu) || !has_sym(s.chem.ldg_nc, g.xi))
      fail("gamma_ex uses symbol outside Ldg_nc: " + config_str(t, g));
    if (!config_feasible(t, g)) fail("infeasible configuration: " + config_str(t, g));
  }
  for (int v = 0; v < s.seed.n_vertices; ++v) {
    if (s.chem.lambda_star[size_t(v)].empty())
      fail("Lambda*(u" + std::to_string(v + 1) + ") empty");
    for (int e : s.chem.lambda_star[size_t(v)])
      if (!in_elems(s.chem.lambda_co, e))
        fail("Lambda*(u" + std::to_string(v + 1) + ") uses element outside Lambda_co");
  }
  for (auto& [m, b] : s.chem.ns_co)
    if (!has_sym(s.chem.ldg_co, m)) fail("ns_co bound for symbol outside Ldg_co: " + sym_str(t, m));
  for (auto& [m, b] : s.chem.ns_nc)
    if (!has_sym(s.chem.ldg_nc, m)) fail("ns_nc bound for symbol outside Ldg_nc: " + sym_str(t, m));
  auto has_cfg = [](const std::vector<EdgeConfig>& v, const EdgeConfig& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (auto& [g, b] : s.chem.ec_co)
    if (!has_cfg(s.chem.gamma_co, g)) fail("ec_co bound outside gamma_co: " + config_str(t, g));
  for (auto& [g, b] : s.chem.ec_in)
    if (!has_cfg(s.chem.gamma_in, g)) fail("ec_in bound outside gamma_in: " + config_str(t, g));
  for (auto& [g, b] : s.chem.ec_ex)
    if (!has_cfg(s.chem.gamma_ex, g)) fail("ec_ex bound outside gamma_ex: " + config_str(t, g));
  for (int i = 0; i < mc; ++i)
    if (s.chem.bd2[size_t(i)].lb + s.chem.bd3[size_t(i)].lb > s.core.ell[size_t(i)].ub)
      fail("bd2_LB + bd3_LB <= ell_UB fails on " + s.seed.edges[size_t(i)].id);
}

// ---------------------------------------------------------------------------
// serialization (canonical form)

inline json spec_to_json(const TargetSpec& s) {
  const auto& t = s.chem.table;
  json j;
  j["seed"]["vertices"] = s.seed.n_vertices;
  json edges = json::array();
  for (const auto& e : s.seed.edges)
    edges.push_back({{"id", e.id}, {"u", e.u + 1}, {"v", e.v + 1}, {"kind", kind_name(e.kind)}});
  j["seed"]["edges"] = edges;
  j["core"]["cs"] = {s.core.cs.lb, s.core.cs.ub};
  json ell = json::object();
  for (size_t i = 0; i < s.seed.edges.size(); ++i) {
    const auto& e = s.seed.edges[i];
    if (e.kind == EdgeKind::Ge2 || e.kind == EdgeKind::Ge1)
      ell[e.id] = {s.core.ell[i].lb, s.core.ell[i].ub};
  }
  j["core"]["ell"] = ell;
  j["noncore"]["n"] = {s.noncore.n_lb, s.noncore.n_star};
  j["noncore"]["rho"] = s.noncore.rho;
  j["noncore"]["dg4_nc_ub"] = s.noncore.dg4_nc_ub;
  auto vmap = [&](const std::vector<Bounds>& v) {
    json m = json::object();
    for (size_t i = 0; i < v.size(); ++i) m["u" + std::to_string(i + 1)] = {v[i].lb, v[i].ub};
    return m;
  };
  auto emap = [&](const std::vector<Bounds>& v) {
    json m = json::object();
    for (size_t i = 0; i < v.size(); ++i) m[s.seed.edges[i].id] = {v[i].lb, v[i].ub};
    return m;
  };
  j["noncore"]["ch_v"] = vmap(s.noncore.ch_v);
  j["noncore"]["ch_e"] = emap(s.noncore.ch_e);
  j["noncore"]["bl_v"] = vmap(s.noncore.bl_v);
  j["noncore"]["bl_e"] = emap(s.noncore.bl_e);

  json& jc = j["chem"];
  json elements = json::array();
  for (int e : s.chem.lambda)
    elements.push_back({{"symbol", t.symbol(e)}, {"valence", t.valence(e)},
                        {"mass_star", t.mass_star(e)}});
  jc["elements"] = elements;
  auto elems = [&](const std::vector<int>& v) {
    json a = json::array();
    for (int e : v) a.push_back(t.symbol(e));
    return a;
  };
  jc["lambda"] = elems(s.chem.lambda);
  jc["lambda_co"] = elems(s.chem.lambda_co);
  jc["lambda_nc"] = elems(s.chem.lambda_nc);
  auto syms = [&](const std::vector<ChemSym>& v) {
    json a = json::array();
    for (auto m : v) a.push_back(sym_str(t, m));
    return a;
  };
  jc["ldg_co"] = syms(s.chem.ldg_co);
  jc["ldg_nc"] = syms(s.chem.ldg_nc);
  auto cfgs = [&](const std::vector<EdgeConfig>& v) {
    json a = json::array();
    for (auto& g : v) a.push_back({sym_str(t, g.mu), sym_str(t, g.xi), g.mult});
    return a;
  };
  jc["gamma_co"] = cfgs(s.chem.gamma_co);
  jc["gamma_in"] = cfgs(s.chem.gamma_in);
  jc["gamma_ex"] = cfgs(s.chem.gamma_ex);
  json lstar = json::object();
  for (size_t v = 0; v < s.chem.lambda_star.size(); ++v)
    lstar["u" + std::to_string(v + 1)] = elems(s.chem.lambda_star[v]);
  jc["lambda_star"] = lstar;
  auto put_elem_bounds = [&](const char* key, const std::map<int, Bounds>& m) {
    if (m.empty()) return;
    json o = json::object();
    for (auto& [e, b] : m) o[t.symbol(e)] = {b.lb, b.ub};
    jc[key] = o;
  };
  put_elem_bounds("na", s.chem.na);
  put_elem_bounds("na_co", s.chem.na_co);
  put_elem_bounds("na_nc", s.chem.na_nc);
  auto put_sym_bounds = [&](const char* key, const std::map<ChemSym, Bounds>& m) {
    if (m.empty()) return;
    json o = json::object();
    for (auto& [x, b] : m) o[sym_str(t, x)] = {b.lb, b.ub};
    jc[key] = o;
  };
  put_sym_bounds("ns", s.chem.ns);
  put_sym_bounds("ns_co", s.chem.ns_co);
  put_sym_bounds("ns_nc", s.chem.ns_nc);
  auto put_adj_bounds = [&](const char* key, const std::map<AdjConfig, Bounds>& m) {
    if (m.empty()) return;
    json o = json::object();
    for (auto& [x, b] : m)
      o[t.symbol(x.a) + " " + t.symbol(x.b) + " " + std::to_string(x.mult)] = {b.lb, b.ub};
    jc[key] = o;
  };
  put_adj_bounds("ac_co", s.chem.ac_co);
  put_adj_bounds("ac_in", s.chem.ac_in);
  put_adj_bounds("ac_ex", s.chem.ac_ex);
  auto put_cfg_bounds = [&](const char* key, const std::map<EdgeConfig, Bounds>& m) {
    if (m.empty()) return;
    json o = json::object();
    for (auto& [x, b] : m)
      o[sym_str(t, x.mu) + " " + sym_str(t, x.xi) + " " + std::to_string(x.mult)] = {b.lb, b.ub};
    jc[key] = o;
  };
  put_cfg_bounds("ec_co", s.chem.ec_co);
  put_cfg_bounds("ec_in", s.chem.ec_in);
  put_cfg_bounds("ec_ex", s.chem.ec_ex);
  jc["bd2"] = emap(s.chem.bd2);
  jc["bd3"] = emap(s.chem.bd3);
  json dg = json::object();
  for (int d = 0; d < 4; ++d) dg[std::to_string(d + 1)] = {s.chem.dg[size_t(d)].lb, s.chem.dg[size_t(d)].ub};
  jc["dg"] = dg;

  json side = json::array();
  for (const auto& c : s.side) {
    json terms = json::array();
    for (const auto& term : c.terms) {
      json jt;
      jt["coef"] = term.coef.den == 1 ? json(term.coef.num) : json({term.coef.num, term.coef.den});
      jt["kind"] = term.kind == SideTerm::Ell ? "ell" : term.kind == SideTerm::Bl ? "bl" : "na";
      jt["edge"] = s.seed.edges[size_t(term.edge)].id;
      if (term.kind == SideTerm::Na) jt["elem"] = t.symbol(term.elem);
      terms.push_back(jt);
    }
    side.push_back({{"terms", terms},
                    {"op", c.rel < 0 ? "<=" : c.rel == 0 ? "==" : ">="},
                    {"rhs", c.rhs.den == 1 ? json(c.rhs.num) : json({c.rhs.num, c.rhs.den})}});
  }
  j["side"] = side;
  return j;
}

// ---------------------------------------------------------------------------
// minimum sigma-co extension

struct MinimumExtension {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  bool simple = true;
  bool connected = true;
  bool min_degree_two = true;
  bool condition_holds() const { return simple && connected && min_degree_two; }
};

inline MinimumExtension minimum_extension(const SeedGraph& seed, const CoreSpec& core) {
  MinimumExtension m;
  m.n = seed.n_vertices;
  for (size_t i = 0; i < seed.edges.size(); ++i) {
    const SeedEdge& e = seed.edges[i];
    if (e.kind == EdgeKind::ZeroOne) continue;
    int len = e.kind == EdgeKind::Ge2 ? core.ell[i].lb : 1;
    int prev = e.u;
    for (int k = 1; k < len; ++k) {
      int w = m.n++;
      m.edges.push_back({prev, w});
      prev = w;
    }
    m.edges.push_back({prev, e.v});
  }
  std::set<std::pair<int, int>> seen;
  std::vector<int> deg(size_t(m.n), 0);
  std::vector<std::vector<int>> adj(static_cast<size_t>(m.n));
  for (auto [u, v] : m.edges) {
    std::pair<int, int> key = u < v ? std::pair<int, int>{u, v} : std::pair<int, int>{v, u};
    if (u == v || !seen.insert(key).second) m.simple = false;
    deg[size_t(u)]++;
    deg[size_t(v)]++;
    adj[size_t(u)].push_back(v);
    adj[size_t(v)].push_back(u);
  }
  for (int v = 0; v < m.n; ++v)
    if (deg[size_t(v)] < 2) m.min_degree_two = false;
  std::vector<char> vis(size_t(m.n), 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[size_t(v)])
      if (!vis[size_t(w)]) { vis[size_t(w)] = 1; ++cnt; stack.push_back(w); }
  }
  m.connected = cnt == m.n;
  return m;
}

// ---------------------------------------------------------------------------
// abstract presets (section on abstract core specifications)

struct PresetSeed {
  SeedGraph seed;
  std::vector<SideConstraint> side;
};

inline PresetSeed preset_seed(const std::string& name) {
  PresetSeed p;
  auto edge = [](std::string id, int u, int v, EdgeKind k) {
    return SeedEdge{std::move(id), u, v, k};
  };
  auto le = [&](std::initializer_list<std::pair<int, int>> lhs, int rhs) {
    // sum of coef * ell(edge) <= rhs-edge handled by caller; generic builder
    SideConstraint c;
    c.rel = -1;
    c.rhs = Rational(rhs);
    for (auto [coef, e] : lhs) c.terms.push_back({Rational(coef), SideTerm::Ell, e, -1});
    return c;
  };
  if (name == "monocyclic") {
    p.seed.n_vertices = 2;
    p.seed.edges = {edge("a1", 0, 1, EdgeKind::Ge2), edge("a2", 0, 1, EdgeKind::Ge1)};
    p.side = {le({{1, 0}, {-1, 1}}, 0)};  // ell(a1) <= ell(a2)
  } else if (name == "rank2_M1") {
    // theta: strands a1, a3 between u1,u2 and u1-u3-u4-u2 via a2
    p.seed.n_vertices = 4;
    p.seed.edges = {edge("a1", 0, 1, EdgeKind::Ge2), edge("a2", 2, 3, EdgeKind::Ge2),
                    edge("a3", 0, 1, EdgeKind::Ge1), edge("a4", 0, 2, EdgeKind::Eq1),
                    edge("a5", 1, 3, EdgeKind::Eq1)};
    p.side = {le({{1, 0}, {-1, 1}}, 0)};  // ell(a1) <= ell(a2)
  } else if (name == "rank2_M2") {
    // dumbbell: two 2-gons u1=u3 and u2=u4 bridged by a1
    p.seed.n_vertices = 4;
    p.seed.edges = {edge("a1", 0, 1, EdgeKind::Ge2), edge("a2", 0, 2, EdgeKind::Ge1),
                    edge("a3", 1, 3, EdgeKind::Ge1), edge("a4", 0, 2, EdgeKind::Eq1),
                    edge("a5", 1, 3, EdgeKind::Eq1)};
    SideConstraint c1;  // ell(a1) <= ell(a2) + ell(a3)
    c1.rel = -1;
    c1.rhs = Rational(0);
    c1.terms = {{Rational(1), SideTerm::Ell, 0, -1},
                {Rational(-1), SideTerm::Ell, 1, -1},
                {Rational(-1), SideTerm::Ell, 2, -1}};
    p.side = {c1, le({{1, 1}, {-1, 2}}, 0)};  // ell(a2) <= ell(a3)
  } else if (name == "rank2_M3") {
    // figure-8 at u1: loop u1-u2-u1 via a1+a4, loop u1-u3-u4-u1 via a2,a5,a3
    p.seed.n_vertices = 4;
    p.seed.edges = {edge("a1", 0, 1, EdgeKind::Ge1), edge("a2", 0, 2, EdgeKind::Ge1),
                    edge("a3", 0, 3, EdgeKind::Ge1), edge("a4", 0, 1, EdgeKind::Eq1),
                    edge("a5", 2, 3, EdgeKind::Eq1)};
    SideConstraint c1;  // ell(a2) <= ell(a1) + 1
    c1.rel = -1;
    c1.rhs = Rational(1);
    c1.terms = {{Rational(1), SideTerm::Ell, 1, -1}, {Rational(-1), SideTerm::Ell, 0, -1}};
    SideConstraint c2;  // ell(a2) <= ell(a3) + 1
    c2.rel = -1;
    c2.rhs = Rational(1);
    c2.terms = {{Rational(1), SideTerm::Ell, 1, -1}, {Rational(-1), SideTerm::Ell, 2, -1}};
    p.side = {c1, c2, le({{1, 0}, {-1, 2}}, 0)};  // ell(a1) <= ell(a3)
  } else {
    throw SpecError("unknown preset: " + name);
  }
  return p;
}

}  // namespace molinfer
