#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "molinfer/chem.hpp"
#include "molinfer/graph.hpp"
#include "molinfer/rational.hpp"
#include "molinfer/structure.hpp"

namespace molinfer {

// The symbol and edge-configuration alphabets a feature vector is keyed by.
struct DescriptorAlphabet {
  std::vector<ChemSym> ldg_co, ldg_nc;
  std::vector<EdgeConfig> gamma_co;  // normalized, mu <= xi
  std::vector<EdgeConfig> gamma_in, gamma_ex;

  bool has(const std::vector<ChemSym>& v, ChemSym s) const {
    return std::find(v.begin(), v.end(), s) != v.end();
  }
  bool has(const std::vector<EdgeConfig>& v, const EdgeConfig& g) const {
    return std::find(v.begin(), v.end(), g) != v.end();
  }
};

// Derive the alphabet a graph actually uses (CLI convenience; never errors).
DescriptorAlphabet observed_alphabet(const ChemicalGraph& g, int rho, const ElementTable& t);

struct FeatureVector {
  int n = 0, cs = 0, ch = 0, bl = 0;
  Rational ms_bar;
  std::array<int, 4> dg_co{}, dg_nc{};           // degree 1..4
  std::array<int, 2> bd_co{}, bd_in{}, bd_ex{};  // multiplicity 2..3
  std::map<ChemSym, int> ns_co, ns_nc;
  std::map<EdgeConfig, int> ec_co, ec_in, ec_ex;
  int ns_h = 0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

  int descriptor_count(const DescriptorAlphabet& a) const {
    return 20 + int(a.ldg_co.size() + a.ldg_nc.size() + a.gamma_co.size() +
                    a.gamma_in.size() + a.gamma_ex.size());
  }

  std::string str(const ElementTable& t) const {
    std::ostringstream os;
    os << "n=" << n << " cs=" << cs << " ch=" << ch << " bl=" << bl
       << " ms=" << ms_bar.str() << " nsH=" << ns_h;
    for (int i = 0; i < 4; ++i) if (dg_co[size_t(i)]) os << " dg" << (i + 1) << "co=" << dg_co[size_t(i)];
    for (int i = 0; i < 4; ++i) if (dg_nc[size_t(i)]) os << " dg" << (i + 1) << "nc=" << dg_nc[size_t(i)];
    for (int i = 0; i < 2; ++i) if (bd_co[size_t(i)]) os << " bd" << (i + 2) << "co=" << bd_co[size_t(i)];
    for (int i = 0; i < 2; ++i) if (bd_in[size_t(i)]) os << " bd" << (i + 2) << "in=" << bd_in[size_t(i)];
    for (int i = 0; i < 2; ++i) if (bd_ex[size_t(i)]) os << " bd" << (i + 2) << "ex=" << bd_ex[size_t(i)];
    for (auto& [s, c] : ns_co) os << " ns_" << sym_str(t, s) << "co=" << c;
    for (auto& [s, c] : ns_nc) os << " ns_" << sym_str(t, s) << "nc=" << c;
    for (auto& [g, c] : ec_co) os << " ec" << config_str(t, g) << "co=" << c;
    for (auto& [g, c] : ec_in) os << " ec" << config_str(t, g) << "in=" << c;
    for (auto& [g, c] : ec_ex) os << " ec" << config_str(t, g) << "ex=" << c;
    return os.str();
  }
};

// Edge-configuration of one edge given the two endpoint degrees; core edges
// come out normalized, directed non-core edges keep their orientation.
inline EdgeConfig edge_config(const ChemicalGraph& g, const ElementTable& t,
                              int u, int v, int beta, bool core,
                              const std::vector<int>& deg) {
  EdgeConfig c{{g.alpha[size_t(u)], deg[size_t(u)]}, {g.alpha[size_t(v)], deg[size_t(v)]}, beta};
  return core ? normalized(t, c) : c;
}

inline FeatureVector feature_vector(const ChemicalGraph& g, int rho,
                                    const DescriptorAlphabet& a, const ElementTable& t) {
  RhoDecomposition d = rho_decompose(g, rho);
  FeatureVector f;
  f.n = g.n();
  f.cs = d.cs;
  f.ch = d.ch;
  f.bl = d.bl;
  auto deg = g.degrees();
  std::int64_t mass = 0;
  for (int v = 0; v < g.n(); ++v) mass += t.mass_star(g.alpha[size_t(v)]);
  f.ms_bar = Rational(mass, f.n);
  for (int v = 0; v < g.n(); ++v) {
    int dv = deg[size_t(v)];
    if (dv < 1 || dv > 4) throw std::invalid_argument("vertex degree outside [1,4]");
    ChemSym s{g.alpha[size_t(v)], dv};
    if (d.is_core[size_t(v)]) {
      f.dg_co[size_t(dv - 1)]++;
      if (!a.has(a.ldg_co, s))
        throw std::invalid_argument("core symbol outside alphabet at vertex " +
                                    std::to_string(v + 1) + ": " + sym_str(t, s));
      f.ns_co[s]++;
    } else {
      f.dg_nc[size_t(dv - 1)]++;
      if (!a.has(a.ldg_nc, s))
        throw std::invalid_argument("non-core symbol outside alphabet at vertex " +
                                    std::to_string(v + 1) + ": " + sym_str(t, s));
      f.ns_nc[s]++;
    }
  }
  size_t ei = 0;
  auto record = [&](const ChemicalGraph::Edge& e, bool core) {
    int cls = d.edge_class[ei++];
    EdgeConfig c = edge_config(g, t, e.u, e.v, e.beta, core, deg);
    if (cls == 0) {
      if (!a.has(a.gamma_co, c))
        throw std::invalid_argument("core edge-configuration outside alphabet: " + config_str(t, c));
      f.ec_co[c]++;
      if (e.beta >= 2) f.bd_co[size_t(e.beta - 2)]++;
    } else if (cls == 1) {
      if (!a.has(a.gamma_in, c))
        throw std::invalid_argument("internal edge-configuration outside alphabet: " + config_str(t, c));
      f.ec_in[c]++;
      if (e.beta >= 2) f.bd_in[size_t(e.beta - 2)]++;
    } else {
      if (!a.has(a.gamma_ex, c))
        throw std::invalid_argument("external edge-configuration outside alphabet: " + config_str(t, c));
      f.ec_ex[c]++;
      if (e.beta >= 2) f.bd_ex[size_t(e.beta - 2)]++;
    }
  };
  for (const auto& e : g.core_edges) record(e, true);
  for (const auto& e : g.noncore_edges) record(e, false);
  int val_sum = 0, beta_sum = 0;
  for (int v = 0; v < g.n(); ++v) val_sum += t.valence(g.alpha[size_t(v)]);
  for (const auto& e : g.core_edges) beta_sum += e.beta;
  for (const auto& e : g.noncore_edges) beta_sum += e.beta;
  f.ns_h = val_sum - 2 * beta_sum;
  return f;
}

inline DescriptorAlphabet observed_alphabet(const ChemicalGraph& g, int rho, const ElementTable& t) {
  RhoDecomposition d = rho_decompose(g, rho);
  auto deg = g.degrees();
  DescriptorAlphabet a;
  std::set<ChemSym> sco, snc;
  std::set<EdgeConfig> gco, gin, gex;
  for (int v = 0; v < g.n(); ++v) {
    ChemSym s{g.alpha[size_t(v)], deg[size_t(v)]};
    (d.is_core[size_t(v)] ? sco : snc).insert(s);
  }
  size_t ei = 0;
  auto rec = [&](const ChemicalGraph::Edge& e, bool core) {
    int cls = d.edge_class[ei++];
    EdgeConfig c = edge_config(g, t, e.u, e.v, e.beta, core, deg);
    (cls == 0 ? gco : cls == 1 ? gin : gex).insert(c);
  };
  for (const auto& e : g.core_edges) rec(e, true);
  for (const auto& e : g.noncore_edges) rec(e, false);
  a.ldg_co.assign(sco.begin(), sco.end());
  a.ldg_nc.assign(snc.begin(), snc.end());
  a.gamma_co.assign(gco.begin(), gco.end());
  a.gamma_in.assign(gin.begin(), gin.end());
  a.gamma_ex.assign(gex.begin(), gex.end());
  return a;
}

}  // namespace molinfer
