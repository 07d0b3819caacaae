#pragma once

// Adjacency-configuration, chemical-symbol and edge-configuration descriptor
// families plus the specification-link rows.  Included from
// milp_build_families.hpp.

namespace molinfer {
namespace milpdetail {

inline void Builder::family_ac() {
  const char* F = "AC";
  const auto& chem = spec.chem;
  int nco = int(out.lam_co.size()), nnc = int(out.lam_nc.size());
  int big = std::max(nco, nnc);

  // aggregated count variables
  std::vector<AdjConfig> aco_norm;  // adjacency configs of the normalized core set
  for (const auto& g : chem.gamma_co) aco_norm.push_back(adj_of(g));
  std::sort(aco_norm.begin(), aco_norm.end(), AdjLess{&chem.table});
  aco_norm.erase(std::unique(aco_norm.begin(), aco_norm.end()), aco_norm.end());

  v_acco.resize(aco_norm.size());
  for (size_t i = 0; i < aco_norm.size(); ++i) {
    Bounds b = bounds_or(chem.ac_co, aco_norm[i], Bounds{0, P.mUB});
    v_acco[i] = M.add_var(nm("acco", int(i) + 1), b.lb, b.ub, F);
  }
  v_acin.resize(out.ain.size());
  for (size_t i = 0; i < out.ain.size(); ++i) {
    Bounds b = bounds_or(chem.ac_in, out.ain[i], Bounds{0, nstar});
    v_acin[i] = M.add_var(nm("acin", int(i) + 1), b.lb, b.ub, F);
  }
  v_acex.resize(out.aex.size());
  for (size_t i = 0; i < out.aex.size(); ++i) {
    Bounds b = bounds_or(chem.ac_ex, out.aex[i], Bounds{0, nstar});
    v_acex[i] = M.add_var(nm("acex", int(i) + 1), b.lb, b.ub, F);
  }

  // proxy element variables for the implicit CT/TC/CF/TF edges
  std::vector<int> aCT(size_t(kC + 1)), aTC(size_t(kC + 1));
  for (int k = 1; k <= kC; ++k) {
    aCT[size_t(k)] = M.add_var(nm("aCTe", k), 0, nco, F);
    aTC[size_t(k)] = M.add_var(nm("aTCe", k), 0, nco, F);
    for (int i = 1; i <= tT; ++i) {
      // pinned to aT(i,0) when vT_i starts / ends the run of color k
      M.add_con(F,
                {{v_aX[1][size_t(i)][0], 1}, {aCT[size_t(k)], -1},
                 {v_chiTk[size_t(i)][size_t(k)], nco}, {v_eT[size_t(i)], -nco}},
                -1, nco);
      M.add_con(F,
                {{aCT[size_t(k)], 1}, {v_aX[1][size_t(i)][0], -1},
                 {v_chiTk[size_t(i)][size_t(k)], nco}, {v_eT[size_t(i)], -nco}},
                -1, nco);
      M.add_con(F,
                {{v_aX[1][size_t(i)][0], 1}, {aTC[size_t(k)], -1},
                 {v_chiTk[size_t(i)][size_t(k)], nco}, {v_eT[size_t(i + 1)], -nco}},
                -1, nco);
      M.add_con(F,
                {{aTC[size_t(k)], 1}, {v_aX[1][size_t(i)][0], -1},
                 {v_chiTk[size_t(i)][size_t(k)], nco}, {v_eT[size_t(i + 1)], -nco}},
                -1, nco);
    }
  }
  std::vector<int> aCF(size_t(tTC + 1)), aTF(size_t(tT + 1));
  for (int c = 1; c <= tTC; ++c) {
    aCF[size_t(c)] = M.add_var(nm("aCFe", c), 0, nnc, F);
    for (int i = 1; i <= tF; ++i) {
      M.add_con(F,
                {{v_aX[2][size_t(i)][0], 1}, {aCF[size_t(c)], -1},
                 {v_chiFc[size_t(i)][size_t(c)], nnc}, {v_eF[size_t(i)], -nnc}},
                -1, nnc);
      M.add_con(F,
                {{aCF[size_t(c)], 1}, {v_aX[2][size_t(i)][0], -1},
                 {v_chiFc[size_t(i)][size_t(c)], nnc}, {v_eF[size_t(i)], -nnc}},
                -1, nnc);
    }
  }
  for (int i = 1; i <= tT; ++i) {
    aTF[size_t(i)] = M.add_var(nm("aTFe", i), 0, nnc, F);
    for (int j = 1; j <= tF; ++j) {
      M.add_con(F,
                {{v_aX[2][size_t(j)][0], 1}, {aTF[size_t(i)], -1},
                 {v_chiFc[size_t(j)][size_t(tTC + i)], nnc}, {v_eF[size_t(j)], -nnc}},
                -1, nnc);
      M.add_con(F,
                {{aTF[size_t(i)], 1}, {v_aX[2][size_t(j)][0], -1},
                 {v_chiFc[size_t(j)][size_t(tTC + i)], nnc}, {v_eF[size_t(j)], -nnc}},
                -1, nnc);
    }
  }

  // slot lists per block
  auto slots_C = [&]() {
    std::vector<EdgeSlot> r;
    for (int i = 0; i < mC; ++i)
      if (v_bC[size_t(i)] >= 0) {
        const SeedEdge& e = spec.seed.edges[size_t(i)];
        r.push_back({"C_" + std::to_string(i + 1), v_bC[size_t(i)], v_eC[size_t(i)],
                     v_aX[0][size_t(e.u + 1)][0], v_aX[0][size_t(e.v + 1)][0], true, true,
                     v_degX[0][size_t(e.u + 1)][0], v_degX[0][size_t(e.v + 1)][0], 0});
      }
    return r;
  };
  auto slots_T = [&]() {
    std::vector<EdgeSlot> r;
    for (int i = 2; i <= tT; ++i)
      r.push_back({"T_" + std::to_string(i), v_bT_edge[size_t(i)], v_eT[size_t(i)],
                   v_aX[1][size_t(i - 1)][0], v_aX[1][size_t(i)][0], true, true,
                   v_degX[1][size_t(i - 1)][0], v_degX[1][size_t(i)][0], 0});
    return r;
  };
  auto slots_F = [&]() {
    std::vector<EdgeSlot> r;
    for (int i = 2; i <= tF; ++i)
      r.push_back({"F_" + std::to_string(i), v_bF_edge[size_t(i)], v_eF[size_t(i)],
                   v_aX[2][size_t(i - 1)][0], v_aX[2][size_t(i)][0], false, false,
                   v_degX[2][size_t(i - 1)][0], v_degX[2][size_t(i)][0], 0});
    return r;
  };
  auto slots_fringe = [&]() {
    std::vector<EdgeSlot> r;
    for (int X = 0; X < 3; ++X)
      for (int i = 1; i <= tx(X); ++i) {
        const Tabc& tr = tree(X, i);
        for (int j = 1; j < tr.n(); ++j) {
          int prt = tr.parent[size_t(j)];
          bool parent_co = X != 2 && prt == 0;
          r.push_back({std::string(XN[X]) + "x_" + std::to_string(i) + "_" + std::to_string(j),
                       v_bX[X][size_t(i)][size_t(j)], v_vX[X][size_t(i)][size_t(j)],
                       v_aX[X][size_t(i)][size_t(prt)], v_aX[X][size_t(i)][size_t(j)], parent_co,
                       false, v_degX[X][size_t(i)][size_t(prt)], v_degX[X][size_t(i)][size_t(j)],
                       tr.depth[size_t(j)]});
        }
      }
    return r;
  };
  auto slots_CT = [&]() {
    std::vector<EdgeSlot> r;
    for (int k = 1; k <= kC; ++k)
      r.push_back({"CT_" + std::to_string(k), v_betaP[size_t(k)], v_dclrT[size_t(k)],
                   v_aX[0][size_t(tail_of(k) + 1)][0], aCT[size_t(k)], true, true,
                   v_degX[0][size_t(tail_of(k) + 1)][0], -1, 0});
    return r;
  };
  auto slots_TC = [&]() {
    std::vector<EdgeSlot> r;
    for (int k = 1; k <= kC; ++k)
      r.push_back({"TC_" + std::to_string(k), v_betaM[size_t(k)], v_dclrT[size_t(k)],
                   aTC[size_t(k)], v_aX[0][size_t(head_of(k) + 1)][0], true, true, -1,
                   v_degX[0][size_t(head_of(k) + 1)][0], 0});
    return r;
  };
  auto slots_CF = [&]() {
    std::vector<EdgeSlot> r;
    for (int c = 1; c <= tTC; ++c)
      r.push_back({"CF_" + std::to_string(c), v_betaIn[size_t(c)], v_dclrF[size_t(c)],
                   v_aX[0][size_t(c)][0], aCF[size_t(c)], true, false, v_degX[0][size_t(c)][0],
                   -1, 0});
    return r;
  };
  auto slots_TF = [&]() {
    std::vector<EdgeSlot> r;
    for (int i = 1; i <= tT; ++i)
      r.push_back({"TF_" + std::to_string(i), v_betaIn[size_t(tTC + i)],
                   v_dclrF[size_t(tTC + i)], v_aX[1][size_t(i)][0], aTF[size_t(i)], true, false,
                   v_degX[1][size_t(i)][0], -1, 0});
    return r;
  };

  // generic AC indicator block over an adjacency-configuration list; returns
  // per-config-and-depth count variables and remembers dlac ids per slot
  struct AcBlock {
    std::vector<EdgeSlot> slots;
    std::map<std::pair<int, int>, int> count;  // (config code, depth) -> var
    std::vector<std::vector<int>> dlac;        // [slot][config code-1] or -1
  };
  auto make_ac_block = [&](const std::string& name, std::vector<EdgeSlot> slots,
                           const std::vector<AdjConfig>& codes, bool per_depth,
                           long long count_ub) {
    AcBlock blk;
    blk.slots = std::move(slots);
    std::set<int> depths;
    for (auto& s : blk.slots) depths.insert(per_depth ? s.depth : 0);
    for (int d : depths)
      for (size_t v = 0; v < codes.size(); ++v)
        blk.count[{int(v) + 1, d}] = M.add_var(
            per_depth ? nm("ac" + name + "p", d, int(v) + 1) : nm("ac" + name, int(v) + 1), 0,
            count_ub, F);
    blk.dlac.assign(blk.slots.size(), std::vector<int>(codes.size(), -1));
    for (size_t s = 0; s < blk.slots.size(); ++s) {
      const EdgeSlot& slot = blk.slots[s];
      std::vector<LinTerm> msum{{slot.bond, -1}};
      std::vector<LinTerm> tsum, hsum;
      int dlp = M.add_var("Dlac" + name + "p_" + slot.tag, 0, big, F);
      int dlm = M.add_var("Dlac" + name + "m_" + slot.tag, 0, big, F);
      tsum.push_back({dlp, 1});
      tsum.push_back({slot.tail_elem, -1});
      hsum.push_back({dlm, 1});
      hsum.push_back({slot.head_elem, -1});
      for (size_t v = 0; v < codes.size(); ++v) {
        const AdjConfig& nu = codes[v];
        int ta = out.code_of(slot.tail_co ? out.lam_co : out.lam_nc, nu.a);
        int tb = out.code_of(slot.head_co ? out.lam_co : out.lam_nc, nu.b);
        if (ta < 0 || tb < 0) continue;  // element not representable on this slot
        int dv = M.add_var("dlac" + name + "_" + slot.tag + "_" + std::to_string(v + 1), 0, 1, F);
        blk.dlac[s][v] = dv;
        msum.push_back({dv, nu.mult});
        tsum.push_back({dv, ta});
        hsum.push_back({dv, tb});
      }
      M.add_con(F, msum, 0, 0);
      M.add_con(F, tsum, 0, 0);
      M.add_con(F, hsum, 0, 0);
      M.add_con(F, {{dlp, 1}, {dlm, 1}, {slot.presence, 2 * big}}, -1, 2 * big);
    }
    // per-config counts
    for (auto& [key, var] : blk.count) {
      std::vector<LinTerm> lhs{{var, -1}};
      for (size_t s = 0; s < blk.slots.size(); ++s) {
        if (per_depth && blk.slots[s].depth != key.second) continue;
        if (blk.dlac[s][size_t(key.first - 1)] >= 0)
          lhs.push_back({blk.dlac[s][size_t(key.first - 1)], 1});
      }
      M.add_con(F, lhs, 0, 0);
    }
    return blk;
  };

  AcBlock bC_ = make_ac_block("C", slots_C(), out.aco_dir, false, mC);
  AcBlock bT_ = make_ac_block("T", slots_T(), out.aco_dir, false, std::max(tT, 1));
  AcBlock bF_ = make_ac_block("F", slots_F(), out.ain, false, std::max(tF, 1));
  AcBlock bX_ = make_ac_block("X", slots_fringe(), out.aex, true, nstar);
  AcBlock bCT_ = make_ac_block("CT", slots_CT(), out.aco_dir, false, std::min(kC, std::max(tT, 1)));
  AcBlock bTC_ = make_ac_block("TC", slots_TC(), out.aco_dir, false, std::min(kC, std::max(tT, 1)));
  AcBlock bCF_ = make_ac_block("CF", slots_CF(), out.ain, false, std::max(tTC, 1));
  AcBlock bTF_ = make_ac_block("TF", slots_TF(), out.ain, false, std::max(tT, 1));
  // multiplicity marginals: per m, block counts match the delta-beta sums
  auto marginal = [&](const AcBlock& blk, const std::vector<AdjConfig>& codes,
                      auto&& beta_terms) {
    for (int m = 1; m <= 3; ++m) {
      std::vector<LinTerm> lhs;
      for (auto& [key, var] : blk.count)
        if (codes[size_t(key.first - 1)].mult == m) lhs.push_back({var, 1});
      beta_terms(lhs, m);
      M.add_con(F, lhs, 0, 0);
    }
  };
  marginal(bC_, out.aco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int i = 0; i < mC; ++i)
      if (!t_delbC[size_t(i)].empty()) l.push_back({t_delbC[size_t(i)][size_t(m)], -1});
  });
  marginal(bT_, out.aco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int i = 2; i <= tT; ++i) l.push_back({t_delbT[size_t(i)][size_t(m)], -1});
  });
  marginal(bF_, out.ain, [&](std::vector<LinTerm>& l, int m) {
    for (int i = 2; i <= tF; ++i) l.push_back({t_delbF[size_t(i)][size_t(m)], -1});
  });
  marginal(bCT_, out.aco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int k = 1; k <= kC; ++k) l.push_back({t_delbP[size_t(k)][size_t(m)], -1});
  });
  marginal(bTC_, out.aco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int k = 1; k <= kC; ++k) l.push_back({t_delbM[size_t(k)][size_t(m)], -1});
  });
  marginal(bCF_, out.ain, [&](std::vector<LinTerm>& l, int m) {
    for (int c = 1; c <= tTC; ++c) l.push_back({t_delbIn[size_t(c)][size_t(m)], -1});
  });
  marginal(bTF_, out.ain, [&](std::vector<LinTerm>& l, int m) {
    for (int c = tTC + 1; c <= cF; ++c) l.push_back({t_delbIn[size_t(c)][size_t(m)], -1});
  });
  // fringe marginal is per depth
  for (int p = 1; p <= rho; ++p)
    for (int m = 1; m <= 3; ++m) {
      std::vector<LinTerm> lhs;
      for (auto& [key, var] : bX_.count)
        if (key.second == p && out.aex[size_t(key.first - 1)].mult == m) lhs.push_back({var, 1});
      for (int X = 0; X < 3; ++X)
        for (int i = 1; i <= tx(X); ++i) {
          const Tabc& tr = tree(X, i);
          for (int j : tr.dsn[size_t(p)])
            lhs.push_back({t_delbX[X][size_t(i)][size_t(j)][size_t(m)], -1});
        }
      M.add_con(F, lhs, 0, 0);
    }

  // final aggregation into the descriptor counts
  for (size_t v = 0; v < aco_norm.size(); ++v) {
    const AdjConfig& nu = aco_norm[v];
    std::vector<LinTerm> lhs{{v_acco[v], -1}};
    int fwd = out.code_of(out.aco_dir, nu);
    int rev = out.code_of(out.aco_dir, adj_reversed(nu));
    for (const AcBlock* blk : {&bC_, &bT_, &bCT_, &bTC_}) {
      if (fwd > 0 && blk->count.count({fwd, 0})) lhs.push_back({blk->count.at({fwd, 0}), 1});
      if (nu != adj_reversed(nu) && rev > 0 && blk->count.count({rev, 0}))
        lhs.push_back({blk->count.at({rev, 0}), 1});
    }
    M.add_con(F, lhs, 0, 0);
  }
  for (size_t v = 0; v < out.ain.size(); ++v) {
    std::vector<LinTerm> lhs{{v_acin[v], -1}};
    for (const AcBlock* blk : {&bF_, &bCF_, &bTF_})
      if (blk->count.count({int(v) + 1, 0})) lhs.push_back({blk->count.at({int(v) + 1, 0}), 1});
    M.add_con(F, lhs, 0, 0);
  }
  for (size_t v = 0; v < out.aex.size(); ++v) {
    std::vector<LinTerm> lhs{{v_acex[v], -1}};
    for (int p = 1; p <= rho; ++p)
      if (bX_.count.count({int(v) + 1, p})) lhs.push_back({bX_.count.at({int(v) + 1, p}), 1});
    M.add_con(F, lhs, 0, 0);
  }

  // stash dlac ids for the EC family ties
  ac_dlac_C = bC_.dlac;
  ac_dlac_T = bT_.dlac;
  ac_dlac_F = bF_.dlac;
  ac_dlac_X = bX_.dlac;
  ac_dlac_CT = bCT_.dlac;
  ac_dlac_TC = bTC_.dlac;
  ac_dlac_CF = bCF_.dlac;
  ac_dlac_TF = bTF_.dlac;
  ac_slots_C = bC_.slots;
  ac_slots_T = bT_.slots;
  ac_slots_F = bF_.slots;
  ac_slots_X = bX_.slots;
  ac_slots_CT = bCT_.slots;
  ac_slots_TC = bTC_.slots;
  ac_slots_CF = bCF_.slots;
  ac_slots_TF = bTF_.slots;
}

}  // namespace milpdetail
}  // namespace molinfer

#include "molinfer/milp_build_desc2.hpp"
