#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "molinfer/descriptors.hpp"
#include "molinfer/milp.hpp"
#include "molinfer/proper_set.hpp"
#include "molinfer/scheme.hpp"
#include "molinfer/spec.hpp"

namespace molinfer {

// How the feature side of the model is fixed: range mode leaves descriptor
// variables inside their sigma_ab bounds, pin mode adds equality rows for a
// prescribed feature vector x*.
struct TargetMode {
  bool pin = false;
  FeatureVector x_star;
};

enum class Objective { None, MinimizeN, MinimizeMass };

struct BuiltModel {
  MilpModel model;
  SchemeParams P;
  int rho = 2;
  // encodings: code 1.. maps to position in these lists ([epsilon] = 0)
  std::vector<int> lam_co, lam_nc;            // element ids
  std::vector<ChemSym> ldg_co, ldg_nc;        // chemical symbols
  std::vector<EdgeConfig> gco, gco_dir, gin, gex;  // edge-configurations
  std::vector<AdjConfig> aco_dir, ain, aex;   // adjacency-configurations
  Tabc treeT, treeF;
  std::vector<Tabc> treeC;  // per seed vertex

  int code_of(const std::vector<int>& v, int x) const {
    auto it = std::find(v.begin(), v.end(), x);
    return it == v.end() ? -1 : int(it - v.begin()) + 1;
  }
  template <class T>
  int code_of(const std::vector<T>& v, const T& x) const {
    auto it = std::find(v.begin(), v.end(), x);
    return it == v.end() ? -1 : int(it - v.begin()) + 1;
  }
};

namespace milpdetail {

// One AC/EC "slot": an edge position of the scheme graph together with the
// variables its indicator rows tie into.
struct EdgeSlot {
  std::string tag;        // unique per slot, used in variable names
  int bond = -1;          // multiplicity variable
  int presence = -1;      // selection indicator variable
  int tail_elem = -1, head_elem = -1;     // element-code variables
  bool tail_co = false, head_co = false;  // which code space each side uses
  int tail_deg = -1, head_deg = -1;       // degree variables (EC)
  int depth = 0;                          // fringe depth p, 0 for non-fringe slots
};

struct Builder {
  const TargetSpec& spec;
  const TargetMode& mode;
  Objective objective;
  BuiltModel out;
  MilpModel& M;
  SchemeParams& P;
  int rho, nstar, tC, tTC, tT, tF, kC, kCt, mC, cF, dmax;

  // frequently used variable id tables
  std::vector<int> v_eC, v_bC;                 // per seed edge (bC: -1 for ge2)
  std::vector<int> v_vT, v_chiT, v_eT;         // eT indexed 1..tT+1
  std::vector<std::vector<int>> v_chiTk;       // [i][k] k in 0..kC
  std::vector<int> v_clrT, v_dclrT;            // 0..kC
  std::vector<int> v_vF, v_chiF, v_eF;
  std::vector<std::vector<int>> v_chiFc;       // [i][c] c in 0..cF
  std::vector<int> v_clrF, v_dclrF;            // 0..cF
  std::vector<int> v_betaP, v_betaM, v_betaIn; // k in 1..kC / c in 1..cF
  std::vector<std::vector<int>> v_vX[3], v_bX[3], v_aX[3], v_degX[3];  // [i][j]
  std::vector<int> v_hX[3];
  std::vector<int> v_bT_edge, v_bF_edge;       // path edge multiplicities, 1..tX+1
  std::vector<int> v_bCT, v_bTC;               // i in 1..tT
  std::vector<int> v_bCF, v_bTF;               // i in 1..tF
  std::vector<int> v_tldgp, v_tldgm;
  std::vector<int> v_degCT, v_degTC, v_degCex;
  int v_cs = -1, v_nG = -1, v_chG = -1, v_blG = -1, v_mass = -1, v_nH = -1;
  std::vector<int> v_sigma_c, v_sX[3];
  std::vector<std::vector<int>> v_sigma_ki;    // [k][i]
  std::vector<std::vector<int>> v_bl_ki;       // [k][i]
  // descriptor tables
  std::vector<int> v_dg, v_dgco, v_dgnc, v_dgC, v_dgT, v_dgin;  // degree 1..4 (index 0..3)
  std::vector<std::vector<int>> v_dgXp[3];     // [p][d]
  std::vector<int> v_bd, v_bdco, v_bdin, v_bdex;  // mult 1..3 (index 0..2)
  std::vector<int> v_na, v_naco, v_nanc, v_naC, v_naT, v_nain;  // per element code-1
  std::vector<std::vector<int>> v_naXp[3];     // [p][elem]
  std::vector<int> v_nsco, v_nsnc;             // per symbol code-1
  std::vector<int> v_ecco, v_ecin, v_ecex;     // per config (normalized/d) code-1
  std::vector<int> v_acco, v_acin, v_acex;
  // indicator tables filled by A5/A6 and read by A7/AC/CS/EC
  std::vector<std::vector<std::vector<int>>> t_delbX[3];  // [i][j][m]
  std::vector<std::vector<int>> t_delbT, t_delbF;         // [i][m] path edges
  std::vector<std::vector<int>> t_delbC;                  // [edge][m]
  std::vector<std::vector<int>> t_delbP, t_delbM, t_delbIn;
  std::vector<std::vector<std::vector<int>>> t_delaX[3];  // [i][j][code]
  // AC block outputs consumed by the EC family: dlac variable ids per slot
  // and the slot descriptions themselves
  std::vector<std::vector<int>> ac_dlac_C, ac_dlac_T, ac_dlac_F, ac_dlac_X, ac_dlac_CT,
      ac_dlac_TC, ac_dlac_CF, ac_dlac_TF;
  std::vector<EdgeSlot> ac_slots_C, ac_slots_T, ac_slots_F, ac_slots_X, ac_slots_CT, ac_slots_TC,
      ac_slots_CF, ac_slots_TF;

  static constexpr const char* XN[3] = {"C", "T", "F"};

  Builder(const TargetSpec& s, const TargetMode& m, Objective obj)
      : spec(s), mode(m), objective(obj), M(out.model), P(out.P) {
    P = scheme_parameters(spec);
    out.rho = spec.rho();
    rho = spec.rho();
    nstar = spec.n_star();
    tC = P.tC;
    tTC = P.tC_tilde;
    tT = P.tT;
    tF = P.tF;
    kC = P.kC;
    kCt = P.kC_tilde;
    mC = P.mC;
    cF = P.cF;
    dmax = P.dmax;
  }

  // ---- small helpers ------------------------------------------------------
  static std::string nm(const std::string& base, int a) { return base + "_" + std::to_string(a); }
  static std::string nm(const std::string& base, int a, int b) {
    return base + "_" + std::to_string(a) + "_" + std::to_string(b);
  }
  static std::string nm(const std::string& base, int a, int b, int c) {
    return base + "_" + std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(c);
  }
  int color_edge(int k) const { return P.edge_order[size_t(k - 1)]; }  // k in 1..kC
  int tail_of(int k) const { return spec.seed.edges[size_t(color_edge(k))].u; }
  int head_of(int k) const { return spec.seed.edges[size_t(color_edge(k))].v; }
  const Tabc& tree(int X, int i) const {
    return X == 0 ? out.treeC[size_t(i - 1)] : X == 1 ? out.treeT : out.treeF;
  }
  int tx(int X) const { return X == 0 ? tC : X == 1 ? tT : tF; }
  int val(int elem) const { return spec.chem.table.valence(elem); }

  std::vector<int> colors_at(int vertex, bool tail) const {
    std::vector<int> r;
    for (int k = 1; k <= kC; ++k)
      if ((tail ? tail_of(k) : head_of(k)) == vertex) r.push_back(k);
    return r;
  }
  // direct-capable seed edges (ge1/zero_one/eq1) incident to vertex
  std::vector<int> direct_edges_at(int vertex, bool tail) const {
    std::vector<int> r;
    for (size_t i = 0; i < spec.seed.edges.size(); ++i) {
      const SeedEdge& e = spec.seed.edges[i];
      if (e.kind == EdgeKind::Ge2) continue;
      if ((tail ? e.u : e.v) == vertex) r.push_back(int(i));
    }
    return r;
  }

  Bounds bounds_or(const std::map<EdgeConfig, Bounds>& m, const EdgeConfig& g, Bounds dflt) const {
    auto it = m.find(g);
    return it == m.end() ? dflt : it->second;
  }
  Bounds bounds_or(const std::map<AdjConfig, Bounds>& m, const AdjConfig& g, Bounds dflt) const {
    auto it = m.find(g);
    return it == m.end() ? dflt : it->second;
  }
  Bounds bounds_or(const std::map<ChemSym, Bounds>& m, ChemSym g, Bounds dflt) const {
    auto it = m.find(g);
    return it == m.end() ? dflt : it->second;
  }
  Bounds bounds_or(const std::map<int, Bounds>& m, int g, Bounds dflt) const {
    auto it = m.find(g);
    return it == m.end() ? dflt : it->second;
  }

  // ---- encodings ----------------------------------------------------------
  void build_encodings() {
    auto& c = spec.chem;
    out.lam_co = c.lambda_co;
    out.lam_nc = c.lambda_nc;
    auto mass_sort = [&](std::vector<int>& v) {
      std::sort(v.begin(), v.end(), [&](int a, int b) { return c.table.less(a, b); });
    };
    mass_sort(out.lam_co);
    mass_sort(out.lam_nc);
    out.ldg_co = c.ldg_co;
    out.ldg_nc = c.ldg_nc;
    out.gco = c.gamma_co;
    out.gco_dir = c.gamma_co;
    for (const auto& g : c.gamma_co_gt()) out.gco_dir.push_back(g);
    std::sort(out.gco_dir.begin(), out.gco_dir.end(), ConfigLess{&c.table});
    out.gin = c.gamma_in;
    out.gex = c.gamma_ex;
    auto adjs = [&](const std::vector<EdgeConfig>& gs) {
      std::vector<AdjConfig> r;
      for (const auto& g : gs) r.push_back(adj_of(g));
      std::sort(r.begin(), r.end(), AdjLess{&c.table});
      r.erase(std::unique(r.begin(), r.end()), r.end());
      return r;
    };
    out.aco_dir = adjs(out.gco_dir);
    out.ain = adjs(out.gin);
    out.aex = adjs(out.gex);
    out.treeT = build_tabc(2, dmax - 1, rho);
    out.treeF = build_tabc(dmax - 1, dmax - 1, rho);
    for (int i = 0; i < tC; ++i) out.treeC.push_back(build_tabc(P.delta[size_t(i)], dmax - 1, rho));
  }

  // ---- A.1: selecting core vertices and edges -----------------------------
  void family_a1() {
    const char* F = "A1_core";
    v_eC.resize(size_t(mC));
    v_bC.assign(size_t(mC), -1);
    for (int i = 0; i < mC; ++i) {
      const SeedEdge& e = spec.seed.edges[size_t(i)];
      long long lb = e.kind == EdgeKind::Eq1 ? 1 : 0;
      long long ub = e.kind == EdgeKind::Ge2 ? 0 : 1;
      v_eC[size_t(i)] = M.add_var(nm("eC", i + 1), lb, ub, F);
    }
    v_vT.resize(size_t(tT + 1));
    v_chiT.resize(size_t(tT + 1));
    v_chiTk.assign(size_t(tT + 1), {});
    for (int i = 1; i <= tT; ++i) {
      v_vT[size_t(i)] = M.add_var(nm("vT", i, 0), 0, 1, F);
      v_chiT[size_t(i)] = M.add_var(nm("chiT", i), 0, kC, F);
      v_chiTk[size_t(i)].resize(size_t(kC + 1));
      for (int k = 0; k <= kC; ++k)
        v_chiTk[size_t(i)][size_t(k)] = M.add_var(nm("chiTk", i, k), 0, 1, F);
    }
    v_eT.resize(size_t(tT + 2));
    for (int i = 1; i <= tT + 1; ++i) {
      bool fict = i == 1 || i == tT + 1;
      if (fict && M.has(nm("eT", i))) { v_eT[size_t(i)] = M.id(nm("eT", i)); continue; }
      v_eT[size_t(i)] = M.add_var(nm("eT", i), 0, fict ? 0 : 1, F);
    }
    v_clrT.resize(size_t(kC + 1));
    v_dclrT.resize(size_t(kC + 1));
    v_clrT[0] = M.add_var(nm("clrT", 0), 0, tT, F);
    v_dclrT[0] = M.add_var(nm("dclrT", 0), 0, 1, F);
    for (int k = 1; k <= kC; ++k) {
      Bounds l = spec.core.ell[size_t(color_edge(k))];
      v_clrT[size_t(k)] = M.add_var(nm("clrT", k), l.lb - 1, std::min(l.ub - 1, tT), F);
      v_dclrT[size_t(k)] = M.add_var(nm("dclrT", k), 0, 1, F);
    }
    v_tldgp.resize(size_t(tC));
    v_tldgm.resize(size_t(tC));
    for (int i = 0; i < tC; ++i) {
      v_tldgp[size_t(i)] = M.add_var(nm("tldgCp", i + 1), 0, 4, F);
      v_tldgm[size_t(i)] = M.add_var(nm("tldgCm", i + 1), 0, 4, F);
    }
    v_cs = M.add_var("cs", spec.core.cs.lb, spec.core.cs.ub, F);

    // (co1c) for ge1 edges: used directly or realized through VT
    for (int k = kCt + 1; k <= kC; ++k) {
      int e = color_edge(k);
      M.add_con(F, {{v_eC[size_t(e)], 1}, {v_clrT[size_t(k)], 1}}, 1, 1);
      M.add_con(F, {{v_clrT[size_t(k)], 1}, {v_eC[size_t(e)], tT}}, -1, tT);
    }
    // (co_5) direct degree at seed vertices
    for (int i = 0; i < tC; ++i) {
      std::vector<LinTerm> tp, tm;
      for (int e : direct_edges_at(i, true)) tp.push_back({v_eC[size_t(e)], 1});
      for (int e : direct_edges_at(i, false)) tm.push_back({v_eC[size_t(e)], 1});
      tp.push_back({v_tldgp[size_t(i)], -1});
      tm.push_back({v_tldgm[size_t(i)], -1});
      M.add_con(F, tp, 0, 0);
      M.add_con(F, tm, 0, 0);
    }
    // (co2)
    for (int i = 1; i <= tT; ++i) {
      M.add_con(F, {{v_chiTk[size_t(i)][0], 1}, {v_vT[size_t(i)], 1}}, 0, 1);
      std::vector<LinTerm> sum, wsum;
      for (int k = 0; k <= kC; ++k) {
        sum.push_back({v_chiTk[size_t(i)][size_t(k)], 1});
        if (k > 0) wsum.push_back({v_chiTk[size_t(i)][size_t(k)], k});
      }
      M.add_con(F, sum, 0, 1);
      wsum.push_back({v_chiT[size_t(i)], -1});
      M.add_con(F, wsum, 0, 0);
    }
    // (co3)
    for (int k = 0; k <= kC; ++k) {
      std::vector<LinTerm> sum;
      for (int i = 1; i <= tT; ++i) sum.push_back({v_chiTk[size_t(i)][size_t(k)], 1});
      auto with = [&](int var, long long c) {
        auto s = sum;
        s.push_back({var, c});
        return s;
      };
      M.add_con(F, with(v_clrT[size_t(k)], -1), 0, 0);
      M.add_con(F, with(v_dclrT[size_t(k)], -tT), -1, 0);  // sum <= tT*dclr
      M.add_con(F, with(v_dclrT[size_t(k)], -1), 1, 0);    // sum >= dclr
    }
    // (co6)
    for (int i = 2; i <= tT; ++i) {
      M.add_con(F, {{v_vT[size_t(i - 1)], 1}, {v_vT[size_t(i)], -1}}, 1, 0);
      // kC(vT(i-1) - eT(i)) >= chi(i-1) - chi(i)
      M.add_con(F,
                {{v_vT[size_t(i - 1)], kC}, {v_eT[size_t(i)], -kC}, {v_chiT[size_t(i - 1)], -1},
                 {v_chiT[size_t(i)], 1}},
                1, 0);
      // chi(i-1) - chi(i) >= vT(i-1) - eT(i)
      M.add_con(F,
                {{v_chiT[size_t(i - 1)], 1}, {v_chiT[size_t(i)], -1}, {v_vT[size_t(i - 1)], -1},
                 {v_eT[size_t(i)], 1}},
                1, 0);
    }
    // (co_last)
    std::vector<LinTerm> cssum{{v_cs, -1}};
    for (int i = 1; i <= tT; ++i) cssum.push_back({v_vT[size_t(i)], 1});
    M.add_con(F, cssum, 0, -tC);
  }

  // ---- A.2: internal vertices and edges -----------------------------------
  void family_a2() {
    const char* F = "A2_internal";
    int bl_ub_max = 0;
    for (auto& b : spec.noncore.bl_v) bl_ub_max += b.ub;
    for (size_t i = 0; i < spec.seed.edges.size(); ++i)
      if (spec.seed.edges[i].kind == EdgeKind::Ge2 || spec.seed.edges[i].kind == EdgeKind::Ge1)
        bl_ub_max += spec.noncore.bl_e[i].ub;
    v_blG = M.add_var("bl_G", P.bl_star_lb, bl_ub_max, F);
    v_vF.resize(size_t(tF + 1));
    v_chiF.resize(size_t(tF + 1));
    v_chiFc.assign(size_t(tF + 1), {});
    for (int i = 1; i <= tF; ++i) {
      v_vF[size_t(i)] = M.add_var(nm("vF", i, 0), 0, 1, F);
      v_chiF[size_t(i)] = M.add_var(nm("chiF", i), 0, cF, F);
      v_chiFc[size_t(i)].resize(size_t(cF + 1));
      for (int c = 0; c <= cF; ++c)
        v_chiFc[size_t(i)][size_t(c)] = M.add_var(nm("chiFc", i, c), 0, 1, F);
    }
    v_eF.resize(size_t(tF + 2));
    for (int i = 1; i <= tF + 1; ++i) {
      bool fict = i == 1 || i == tF + 1;
      if (fict && M.has(nm("eF", i))) { v_eF[size_t(i)] = M.id(nm("eF", i)); continue; }
      v_eF[size_t(i)] = M.add_var(nm("eF", i), 0, fict ? 0 : 1, F);
    }
    v_clrF.resize(size_t(cF + 1));
    v_dclrF.resize(size_t(cF + 1));
    v_clrF[0] = M.add_var(nm("clrF", 0), 0, tF, F);
    v_dclrF[0] = M.add_var(nm("dclrF", 0), 0, 1, F);
    for (int c = 1; c <= cF; ++c) {
      v_clrF[size_t(c)] = M.add_var(nm("clrF", c), 0, tF, F);
      long long lb = c <= tTC ? spec.noncore.bl_v[size_t(c - 1)].lb : 0;
      v_dclrF[size_t(c)] = M.add_var(nm("dclrF", c), lb, 1, F);
    }
    // (int_first)
    for (int i = 1; i <= tF; ++i) {
      M.add_con(F, {{v_chiFc[size_t(i)][0], 1}, {v_vF[size_t(i)], 1}}, 0, 1);
      std::vector<LinTerm> sum, wsum;
      for (int c = 0; c <= cF; ++c) {
        sum.push_back({v_chiFc[size_t(i)][size_t(c)], 1});
        if (c > 0) wsum.push_back({v_chiFc[size_t(i)][size_t(c)], c});
      }
      M.add_con(F, sum, 0, 1);
      wsum.push_back({v_chiF[size_t(i)], -1});
      M.add_con(F, wsum, 0, 0);
    }
    // (int3)
    for (int c = 0; c <= cF; ++c) {
      std::vector<LinTerm> sum;
      for (int i = 1; i <= tF; ++i) sum.push_back({v_chiFc[size_t(i)][size_t(c)], 1});
      auto with = [&](int var, long long coef) {
        auto s = sum;
        s.push_back({var, coef});
        return s;
      };
      M.add_con(F, with(v_clrF[size_t(c)], -1), 0, 0);
      M.add_con(F, with(v_dclrF[size_t(c)], -tF), -1, 0);
      M.add_con(F, with(v_dclrF[size_t(c)], -1), 1, 0);
    }
    // (int6)
    for (int i = 2; i <= tF; ++i) {
      M.add_con(F, {{v_vF[size_t(i - 1)], 1}, {v_vF[size_t(i)], -1}}, 1, 0);
      M.add_con(F,
                {{v_vF[size_t(i - 1)], cF}, {v_eF[size_t(i)], -cF}, {v_chiF[size_t(i - 1)], -1},
                 {v_chiF[size_t(i)], 1}},
                1, 0);
      M.add_con(F,
                {{v_chiF[size_t(i - 1)], 1}, {v_chiF[size_t(i)], -1}, {v_vF[size_t(i - 1)], -1},
                 {v_eF[size_t(i)], 1}},
                1, 0);
    }
    // (int9) first half: bl_G
    std::vector<LinTerm> bls{{v_blG, -1}};
    for (int c = 1; c <= cF; ++c) bls.push_back({v_dclrF[size_t(c)], 1});
    M.add_con(F, bls, 0, 0);
    // bl(k,i) counting
    v_bl_ki.assign(size_t(kC + 1), {});
    for (int k = 1; k <= kC; ++k) {
      v_bl_ki[size_t(k)].resize(size_t(tT + 1));
      for (int i = 1; i <= tT; ++i)
        v_bl_ki[size_t(k)][size_t(i)] = M.add_var(nm("blki", k, i), 0, 1, F);
    }
    for (int k = 1; k <= kC; ++k)
      for (int i = 1; i <= tT; ++i)
        M.add_con(F,
                  {{v_bl_ki[size_t(k)][size_t(i)], 1}, {v_dclrF[size_t(tTC + i)], -1},
                   {v_chiTk[size_t(i)][size_t(k)], -1}},
                  1, -1);
    {
      std::vector<LinTerm> lhs;
      for (int k = 1; k <= kC; ++k)
        for (int i = 1; i <= tT; ++i) lhs.push_back({v_bl_ki[size_t(k)][size_t(i)], 1});
      for (int i = 1; i <= tT; ++i) lhs.push_back({v_dclrF[size_t(tTC + i)], -1});
      M.add_con(F, lhs, -1, 0);
    }
    // (int_last)
    for (int k = 1; k <= kC; ++k) {
      const Bounds& b = spec.noncore.bl_e[size_t(color_edge(k))];
      std::vector<LinTerm> sum;
      for (int i = 1; i <= tT; ++i) sum.push_back({v_bl_ki[size_t(k)][size_t(i)], 1});
      M.add_con(F, sum, 1, b.lb);
      M.add_con(F, sum, -1, b.ub);
    }
  }

  // ---- A.3: fringe trees ---------------------------------------------------
  void family_a3() {
    const char* F = "A3_fringe";
    int ch_ub_max = 0;
    for (auto& b : spec.noncore.ch_v) ch_ub_max = std::max(ch_ub_max, b.ub);
    for (size_t i = 0; i < spec.seed.edges.size(); ++i)
      if (spec.seed.edges[i].kind == EdgeKind::Ge2 || spec.seed.edges[i].kind == EdgeKind::Ge1)
        ch_ub_max = std::max(ch_ub_max, spec.noncore.ch_e[i].ub);
    v_nG = M.add_var("n_G", spec.noncore.n_lb, nstar, F);
    v_chG = M.add_var("ch_G", 0, ch_ub_max, F);

    for (int X = 0; X < 3; ++X) {
      v_vX[X].assign(size_t(tx(X) + 1), {});
      v_hX[X].resize(size_t(tx(X) + 1));
      for (int i = 1; i <= tx(X); ++i) {
        const Tabc& tr = tree(X, i);
        v_vX[X][size_t(i)].resize(size_t(tr.n()));
        for (int j = 0; j < tr.n(); ++j) {
          if (j == 0) {
            if (X == 0)
              v_vX[X][size_t(i)][0] = M.add_var(nm("vC", i, 0), 1, 1, F);  // seed roots always used
            else
              v_vX[X][size_t(i)][0] = X == 1 ? v_vT[size_t(i)] : v_vF[size_t(i)];
          } else {
            v_vX[X][size_t(i)][size_t(j)] =
                M.add_var(nm(std::string("v") + XN[X], i, j), 0, 1, F);
          }
        }
        long long hub = rho;
        if (X == 0) {
          // fringe height at seed vertex i is capped by its ch_UB
          hub = std::min<long long>(rho, spec.noncore.ch_v[size_t(i - 1)].ub);
        }
        long long hlb = 0;
        if (X == 0 && i > tTC) hlb = spec.noncore.ch_v[size_t(i - 1)].lb;  // (int14b)
        v_hX[X][size_t(i)] = M.add_var(nm(std::string("h") + XN[X], i), hlb, hub, F);
      }
    }
    // sigma selectors
    v_sigma_c.resize(size_t(cF + 1));
    for (int c = 1; c <= cF; ++c) v_sigma_c[size_t(c)] = M.add_var(nm("sigc", c), 0, 1, F);
    for (int X = 0; X < 3; ++X) {
      v_sX[X].resize(size_t(tx(X) + 1));
      for (int i = 1; i <= tx(X); ++i)
        v_sX[X][size_t(i)] = M.add_var(nm(std::string("s") + XN[X], i), 0, 1, F);
    }
    // (ex3)
    for (int i = 1; i <= tF; ++i) {
      int jrho = out.treeF.leftmost[size_t(rho)];
      M.add_con(F,
                {{v_vX[2][size_t(i)][size_t(jrho)], 1}, {v_vF[size_t(i)], -1},
                 {v_eF[size_t(i + 1)], 1}},
                1, 0);
    }
    // (ex4) proper-set gating
    for (int X = 0; X < 3; ++X)
      for (int i = 1; i <= tx(X); ++i)
        for (auto [a, b] : proper_set(tree(X, i)))
          M.add_con(F, {{v_vX[X][size_t(i)][size_t(a)], 1}, {v_vX[X][size_t(i)][size_t(b)], -1}},
                    1, 0);
    // (ex5) height on the leftmost path
    for (int X = 0; X < 3; ++X)
      for (int i = 1; i <= tx(X); ++i) {
        const Tabc& tr = tree(X, i);
        std::vector<LinTerm> sum{{v_hX[X][size_t(i)], -1}};
        for (int p = 1; p <= tr.c; ++p)
          if (!tr.dsn[size_t(p)].empty())
            sum.push_back({v_vX[X][size_t(i)][size_t(tr.leftmost[size_t(p)])], 1});
        M.add_con(F, sum, 0, 0);
      }
    // (ex6)/(ex6b) fringe-tree size cap n <= 2 + 2 * root children
    for (int X = 0; X < 3; ++X)
      for (int i = 1; i <= tx(X); ++i) {
        const Tabc& tr = tree(X, i);
        std::vector<LinTerm> lhs;
        for (int j = 0; j < tr.n(); ++j) lhs.push_back({v_vX[X][size_t(i)][size_t(j)], 1});
        for (int h : tr.children[0]) lhs.push_back({v_vX[X][size_t(i)][size_t(h)], -2});
        M.add_con(F, lhs, -1, 2);
      }
    // (int10) with the height lower bound active only for used colors
    for (int c = 1; c <= cF; ++c) {
      M.add_con(F, {{v_chG, 1}, {v_clrF[size_t(c)], -1}, {v_dclrF[size_t(c)], -rho}}, 1, 0);
      M.add_con(F,
                {{v_chG, 1}, {v_clrF[size_t(c)], -1}, {v_dclrF[size_t(c)], -rho},
                 {v_sigma_c[size_t(c)], nstar}},
                -1, nstar);
    }
    for (int X = 0; X < 3; ++X)
      for (int i = 1; i <= tx(X); ++i) {
        M.add_con(F, {{v_chG, 1}, {v_hX[X][size_t(i)], -1}}, 1, 0);
        M.add_con(F, {{v_chG, 1}, {v_hX[X][size_t(i)], -1}, {v_sX[X][size_t(i)], nstar}}, -1,
                  nstar);
      }
    // (int9) second half: exactly one height witness
    {
      std::vector<LinTerm> sum;
      for (int c = 1; c <= cF; ++c) sum.push_back({v_sigma_c[size_t(c)], 1});
      for (int X = 0; X < 3; ++X)
        for (int i = 1; i <= tx(X); ++i) sum.push_back({v_sX[X][size_t(i)], 1});
      M.add_con(F, sum, 0, 1);
    }
    // (ex2) vertex count
    {
      std::vector<LinTerm> sum{{v_nG, -1}};
      for (int X = 0; X < 3; ++X)
        for (int i = 1; i <= tx(X); ++i)
          for (int j = 0; j < tree(X, i).n(); ++j)
            sum.push_back({v_vX[X][size_t(i)][size_t(j)], 1});
      M.add_con(F, sum, 0, 0);
    }
    // (int14) per-vertex core height range, branch-capable block
    for (int i = 1; i <= tTC; ++i) {
      const Bounds& ch = spec.noncore.ch_v[size_t(i - 1)];
      M.add_con(F, {{v_hX[0][size_t(i)], 1}, {v_dclrF[size_t(i)], nstar}}, 1, ch.lb);
      M.add_con(F, {{v_clrF[size_t(i)], 1}}, 1, ch.lb - rho);
      M.add_con(F, {{v_clrF[size_t(i)], 1}, {v_dclrF[size_t(i)], nstar}}, -1,
                ch.ub - rho + nstar);
    }
    // (int15) height caps along colored paths
    for (int k = 1; k <= kC; ++k) {
      const Bounds& ch = spec.noncore.ch_e[size_t(color_edge(k))];
      for (int i = 1; i <= tT; ++i) {
        M.add_con(F,
                  {{v_hX[1][size_t(i)], 1}, {v_dclrF[size_t(tTC + i)], -nstar},
                   {v_chiTk[size_t(i)][size_t(k)], nstar}},
                  -1, ch.ub + nstar);
        M.add_con(F,
                  {{v_clrF[size_t(tTC + i)], 1}, {v_dclrF[size_t(tTC + i)], nstar},
                   {v_chiTk[size_t(i)][size_t(k)], nstar}},
                  -1, ch.ub - rho + 2 * nstar);
      }
    }
    // (int16) + (ex_last) height witnesses per colored path
    v_sigma_ki.assign(size_t(kC + 1), {});
    for (int k = 1; k <= kC; ++k) {
      v_sigma_ki[size_t(k)].resize(size_t(tT + 1));
      for (int i = 1; i <= tT; ++i)
        v_sigma_ki[size_t(k)][size_t(i)] = M.add_var(nm("sigT", k, i), 0, 1, F);
    }
    for (int k = 1; k <= kC; ++k) {
      std::vector<LinTerm> sum{{v_dclrT[size_t(k)], -1}};
      for (int i = 1; i <= tT; ++i) sum.push_back({v_sigma_ki[size_t(k)][size_t(i)], 1});
      M.add_con(F, sum, 0, 0);
      const Bounds& ch = spec.noncore.ch_e[size_t(color_edge(k))];
      for (int i = 1; i <= tT; ++i) {
        M.add_con(F,
                  {{v_chiTk[size_t(i)][size_t(k)], 1}, {v_sigma_ki[size_t(k)][size_t(i)], -1}}, 1,
                  0);
        M.add_con(F,
                  {{v_hX[1][size_t(i)], 1}, {v_dclrF[size_t(tTC + i)], nstar},
                   {v_sigma_ki[size_t(k)][size_t(i)], -nstar}},
                  1, ch.lb - nstar);
        M.add_con(F,
                  {{v_clrF[size_t(tTC + i)], 1}, {v_dclrF[size_t(tTC + i)], -nstar},
                   {v_sigma_ki[size_t(k)][size_t(i)], -nstar}},
                  1, ch.lb - rho - 2 * nstar);
      }
    }
  }

  // remaining families in milp_build_families.hpp-style continuation
  void family_a4();
  void family_a5();
  void family_a6();
  void family_a7();
  void family_ac();
  void family_cs();
  void family_ec();
  void family_spec_link();

  BuiltModel build() {
    build_encodings();
    M.add_var("zero_var", 0, 0, "objective");
    family_a1();
    family_a2();
    family_a3();
    family_a4();
    family_a5();
    family_a6();
    family_a7();
    family_ac();
    family_cs();
    family_ec();
    family_spec_link();
    if (objective == Objective::MinimizeN)
      M.set_objective({{v_nG, 1}});
    else if (objective == Objective::MinimizeMass)
      M.set_objective({{v_mass, 1}});
    return std::move(out);
  }
};

}  // namespace milpdetail

BuiltModel build_model(const TargetSpec& spec, const TargetMode& mode = {},
                       Objective objective = Objective::None);

}  // namespace molinfer

#include "molinfer/milp_build_families.hpp"
