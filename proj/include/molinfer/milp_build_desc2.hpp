#pragma once

// Chemical-symbol and edge-configuration descriptor families, specification
// link rows, and the build_model entry point.

namespace molinfer {
namespace milpdetail {

inline void Builder::family_cs() {
  const char* F = "CS";
  const auto& chem = spec.chem;
  int nsym_co = int(out.ldg_co.size()), nsym_nc = int(out.ldg_nc.size());

  v_nsco.resize(size_t(nsym_co));
  for (int s = 1; s <= nsym_co; ++s) {
    Bounds b = bounds_or(chem.ns_co, out.ldg_co[size_t(s - 1)], Bounds{0, spec.core.cs.ub});
    v_nsco[size_t(s - 1)] = M.add_var(nm("nsco", s), b.lb, std::min(b.ub, spec.core.cs.ub), F);
  }
  v_nsnc.resize(size_t(nsym_nc));
  int nc_cap = std::max(0, nstar - spec.core.cs.lb);
  for (int s = 1; s <= nsym_nc; ++s) {
    Bounds b = bounds_or(chem.ns_nc, out.ldg_nc[size_t(s - 1)], Bounds{0, nc_cap});
    v_nsnc[size_t(s - 1)] = M.add_var(nm("nsnc", s), b.lb, std::min(b.ub, nc_cap), F);
  }

  // per-slot symbol indicator blocks
  struct SymSlot {
    std::string tag;
    int elem_var, deg_var;
    bool core;
  };
  std::vector<SymSlot> slots;
  for (int i = 1; i <= tC; ++i)
    slots.push_back({"C_" + std::to_string(i), v_aX[0][size_t(i)][0], v_degX[0][size_t(i)][0], true});
  for (int i = 1; i <= tT; ++i)
    slots.push_back({"T_" + std::to_string(i), v_aX[1][size_t(i)][0], v_degX[1][size_t(i)][0], true});
  for (int i = 1; i <= tF; ++i)
    slots.push_back(
        {"F_" + std::to_string(i), v_aX[2][size_t(i)][0], v_degX[2][size_t(i)][0], false});
  for (int X = 0; X < 3; ++X)
    for (int i = 1; i <= tx(X); ++i)
      for (int j = 1; j < tree(X, i).n(); ++j)
        slots.push_back({std::string(XN[X]) + "x_" + std::to_string(i) + "_" + std::to_string(j),
                         v_aX[X][size_t(i)][size_t(j)], v_degX[X][size_t(i)][size_t(j)], false});

  std::vector<std::vector<int>> dlns(slots.size());
  for (size_t s = 0; s < slots.size(); ++s) {
    const auto& syms = slots[s].core ? out.ldg_co : out.ldg_nc;
    const auto& lam = slots[s].core ? out.lam_co : out.lam_nc;
    dlns[s].assign(syms.size() + 1, -1);
    std::vector<LinTerm> ones, esum{{slots[s].elem_var, -1}}, dsum{{slots[s].deg_var, -1}};
    int eps = M.add_var("dlns_" + slots[s].tag + "_0", 0, 1, F);
    dlns[s][0] = eps;
    ones.push_back({eps, 1});
    for (size_t m = 0; m < syms.size(); ++m) {
      int var = M.add_var("dlns_" + slots[s].tag + "_" + std::to_string(m + 1), 0, 1, F);
      dlns[s][m + 1] = var;
      ones.push_back({var, 1});
      esum.push_back({var, out.code_of(lam, syms[m].elem)});
      dsum.push_back({var, syms[m].deg});
    }
    M.add_con(F, ones, 0, 1);
    M.add_con(F, esum, 0, 0);
    M.add_con(F, dsum, 0, 0);
  }
  for (int m = 1; m <= nsym_co; ++m) {
    std::vector<LinTerm> lhs{{v_nsco[size_t(m - 1)], -1}};
    for (size_t s = 0; s < slots.size(); ++s)
      if (slots[s].core) lhs.push_back({dlns[s][size_t(m)], 1});
    M.add_con(F, lhs, 0, 0);
  }
  for (int m = 1; m <= nsym_nc; ++m) {
    std::vector<LinTerm> lhs{{v_nsnc[size_t(m - 1)], -1}};
    for (size_t s = 0; s < slots.size(); ++s)
      if (!slots[s].core) lhs.push_back({dlns[s][size_t(m)], 1});
    M.add_con(F, lhs, 0, 0);
  }
  // optional bounds over the union alphabet
  for (auto& [sym, b] : chem.ns) {
    int var = M.add_var("nsall_" + sym_str(chem.table, sym), b.lb, b.ub, F);
    std::vector<LinTerm> lhs{{var, -1}};
    int cco = out.code_of(out.ldg_co, sym);
    int cnc = out.code_of(out.ldg_nc, sym);
    if (cco > 0) lhs.push_back({v_nsco[size_t(cco - 1)], 1});
    if (cnc > 0) lhs.push_back({v_nsnc[size_t(cnc - 1)], 1});
    M.add_con(F, lhs, 0, 0);
  }
}

inline void Builder::family_ec() {
  const char* F = "EC";
  const auto& chem = spec.chem;

  v_ecco.resize(chem.gamma_co.size());
  for (size_t i = 0; i < chem.gamma_co.size(); ++i) {
    Bounds b = bounds_or(chem.ec_co, chem.gamma_co[i], Bounds{0, P.mUB});
    v_ecco[i] = M.add_var(nm("ecco", int(i) + 1), b.lb, b.ub, F);
  }
  v_ecin.resize(out.gin.size());
  for (size_t i = 0; i < out.gin.size(); ++i) {
    Bounds b = bounds_or(chem.ec_in, out.gin[i], Bounds{0, nstar});
    v_ecin[i] = M.add_var(nm("ecin", int(i) + 1), b.lb, b.ub, F);
  }
  v_ecex.resize(out.gex.size());
  for (size_t i = 0; i < out.gex.size(); ++i) {
    Bounds b = bounds_or(chem.ec_ex, out.gex[i], Bounds{0, nstar});
    v_ecex[i] = M.add_var(nm("ecex", int(i) + 1), b.lb, b.ub, F);
  }

  // proxy head/tail degree variables for the implicit CT/TC/CF/TF edges
  std::vector<int> degCTT(size_t(kC + 1)), degTCT(size_t(kC + 1));
  for (int k = 1; k <= kC; ++k) {
    degCTT[size_t(k)] = M.add_var(nm("degCTT", k), 0, 4, F);
    degTCT[size_t(k)] = M.add_var(nm("degTCT", k), 0, 4, F);
    for (int i = 1; i <= tT; ++i) {
      M.add_con(F,
                {{v_degX[1][size_t(i)][0], 1}, {degCTT[size_t(k)], -1},
                 {v_chiTk[size_t(i)][size_t(k)], 4}, {v_eT[size_t(i)], -4}},
                -1, 4);
      M.add_con(F,
                {{degCTT[size_t(k)], 1}, {v_degX[1][size_t(i)][0], -1},
                 {v_chiTk[size_t(i)][size_t(k)], 4}, {v_eT[size_t(i)], -4}},
                -1, 4);
      M.add_con(F,
                {{v_degX[1][size_t(i)][0], 1}, {degTCT[size_t(k)], -1},
                 {v_chiTk[size_t(i)][size_t(k)], 4}, {v_eT[size_t(i + 1)], -4}},
                -1, 4);
      M.add_con(F,
                {{degTCT[size_t(k)], 1}, {v_degX[1][size_t(i)][0], -1},
                 {v_chiTk[size_t(i)][size_t(k)], 4}, {v_eT[size_t(i + 1)], -4}},
                -1, 4);
    }
  }
  std::vector<int> degCFF(size_t(tTC + 1)), degTFF(size_t(tT + 1));
  for (int c = 1; c <= tTC; ++c) {
    degCFF[size_t(c)] = M.add_var(nm("degCFF", c), 0, 4, F);
    for (int i = 1; i <= tF; ++i) {
      M.add_con(F,
                {{v_degX[2][size_t(i)][0], 1}, {degCFF[size_t(c)], -1},
                 {v_chiFc[size_t(i)][size_t(c)], 4}, {v_eF[size_t(i)], -4}},
                -1, 4);
      M.add_con(F,
                {{degCFF[size_t(c)], 1}, {v_degX[2][size_t(i)][0], -1},
                 {v_chiFc[size_t(i)][size_t(c)], 4}, {v_eF[size_t(i)], -4}},
                -1, 4);
    }
  }
  for (int i = 1; i <= tT; ++i) {
    degTFF[size_t(i)] = M.add_var(nm("degTFF", i), 0, 4, F);
    for (int j = 1; j <= tF; ++j) {
      M.add_con(F,
                {{v_degX[2][size_t(j)][0], 1}, {degTFF[size_t(i)], -1},
                 {v_chiFc[size_t(j)][size_t(tTC + i)], 4}, {v_eF[size_t(j)], -4}},
                -1, 4);
      M.add_con(F,
                {{degTFF[size_t(i)], 1}, {v_degX[2][size_t(j)][0], -1},
                 {v_chiFc[size_t(j)][size_t(tTC + i)], 4}, {v_eF[size_t(j)], -4}},
                -1, 4);
    }
  }
  // attach proxy degrees to the slot copies
  auto with_deg = [&](std::vector<EdgeSlot> slots, const std::vector<int>* tails,
                      const std::vector<int>* heads) {
    for (size_t s = 0; s < slots.size(); ++s) {
      if (tails) slots[s].tail_deg = (*tails)[s + 1];
      if (heads) slots[s].head_deg = (*heads)[s + 1];
    }
    return slots;
  };

  struct EcBlock {
    std::map<std::pair<int, int>, int> count;  // (config code, depth) -> var
  };
  auto make_ec_block = [&](const std::string& name, const std::vector<EdgeSlot>& slots,
                           const std::vector<std::vector<int>>& dlac,
                           const std::vector<EdgeConfig>& configs,
                           const std::vector<AdjConfig>& accodes, bool per_depth,
                           long long count_ub) {
    EcBlock blk;
    std::set<int> depths;
    for (auto& s : slots) depths.insert(per_depth ? s.depth : 0);
    for (int d : depths)
      for (size_t g = 0; g < configs.size(); ++g)
        blk.count[{int(g) + 1, d}] = M.add_var(
            per_depth ? nm("ec" + name + "p", d, int(g) + 1) : nm("ec" + name, int(g) + 1), 0,
            count_ub, F);
    std::vector<std::vector<int>> ids_per_slot(slots.size());
    for (size_t s = 0; s < slots.size(); ++s) {
      const EdgeSlot& slot = slots[s];
      int dlp = M.add_var("Dlec" + name + "p_" + slot.tag, 0, 4, F);
      int dlm = M.add_var("Dlec" + name + "m_" + slot.tag, 0, 4, F);
      std::vector<LinTerm> tie;  // sum [ac(gamma)] dlec - sum [nu] dlac = 0
      std::vector<LinTerm> tdeg{{dlp, 1}, {slot.tail_deg, -1}};
      std::vector<LinTerm> hdeg{{dlm, 1}, {slot.head_deg, -1}};
      std::vector<int> ids(configs.size(), -1);
      for (size_t g = 0; g < configs.size(); ++g) {
        const EdgeConfig& gamma = configs[g];
        // slots whose tail element lives in the other alphabet cannot carry
        // this configuration; the indicator is simply absent there
        int ta = out.code_of(slot.tail_co ? out.lam_co : out.lam_nc, gamma.mu.elem);
        int tb = out.code_of(slot.head_co ? out.lam_co : out.lam_nc, gamma.xi.elem);
        if (ta < 0 || tb < 0) continue;
        int var = M.add_var("dlec" + name + "_" + slot.tag + "_" + std::to_string(g + 1), 0, 1, F);
        ids[g] = var;
        int accode = out.code_of(accodes, adj_of(gamma));
        tie.push_back({var, accode});
        tdeg.push_back({var, gamma.mu.deg});
        hdeg.push_back({var, gamma.xi.deg});
      }
      for (size_t v = 0; v < dlac[s].size(); ++v)
        if (dlac[s][v] >= 0) tie.push_back({dlac[s][v], -(int(v) + 1)});
      M.add_con(F, tie, 0, 0);
      M.add_con(F, tdeg, 0, 0);
      M.add_con(F, hdeg, 0, 0);
      M.add_con(F, {{dlp, 1}, {dlm, 1}, {slot.presence, 8}}, -1, 8);
      ids_per_slot[s] = std::move(ids);
    }
    for (auto& [key, var] : blk.count) {
      std::vector<LinTerm> lhs{{var, -1}};
      for (size_t s = 0; s < slots.size(); ++s) {
        if (per_depth && slots[s].depth != key.second) continue;
        if (ids_per_slot[s][size_t(key.first - 1)] >= 0)
          lhs.push_back({ids_per_slot[s][size_t(key.first - 1)], 1});
      }
      M.add_con(F, lhs, 0, 0);
    }
    return blk;
  };

  EcBlock eC_ = make_ec_block("C", ac_slots_C, ac_dlac_C, out.gco_dir, out.aco_dir, false, mC);
  EcBlock eT_ =
      make_ec_block("T", ac_slots_T, ac_dlac_T, out.gco_dir, out.aco_dir, false, std::max(tT, 1));
  EcBlock eF_ =
      make_ec_block("F", ac_slots_F, ac_dlac_F, out.gin, out.ain, false, std::max(tF, 1));
  EcBlock eX_ = make_ec_block("X", ac_slots_X, ac_dlac_X, out.gex, out.aex, true, nstar);
  EcBlock eCT_ = make_ec_block("CT", with_deg(ac_slots_CT, nullptr, &degCTT), ac_dlac_CT,
                               out.gco_dir, out.aco_dir, false, std::min(kC, std::max(tT, 1)));
  EcBlock eTC_ = make_ec_block("TC", with_deg(ac_slots_TC, &degTCT, nullptr), ac_dlac_TC,
                               out.gco_dir, out.aco_dir, false, std::min(kC, std::max(tT, 1)));
  EcBlock eCF_ = make_ec_block("CF", with_deg(ac_slots_CF, nullptr, &degCFF), ac_dlac_CF, out.gin,
                               out.ain, false, std::max(tTC, 1));
  EcBlock eTF_ = make_ec_block("TF", with_deg(ac_slots_TF, nullptr, &degTFF), ac_dlac_TF, out.gin,
                               out.ain, false, std::max(tT, 1));

  // multiplicity marginals
  auto marginal = [&](const EcBlock& blk, const std::vector<EdgeConfig>& configs,
                      auto&& beta_terms) {
    for (int m = 1; m <= 3; ++m) {
      std::vector<LinTerm> lhs;
      for (auto& [key, var] : blk.count)
        if (configs[size_t(key.first - 1)].mult == m) lhs.push_back({var, 1});
      beta_terms(lhs, m);
      M.add_con(F, lhs, 0, 0);
    }
  };
  marginal(eC_, out.gco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int i = 0; i < mC; ++i)
      if (!t_delbC[size_t(i)].empty()) l.push_back({t_delbC[size_t(i)][size_t(m)], -1});
  });
  marginal(eT_, out.gco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int i = 2; i <= tT; ++i) l.push_back({t_delbT[size_t(i)][size_t(m)], -1});
  });
  marginal(eF_, out.gin, [&](std::vector<LinTerm>& l, int m) {
    for (int i = 2; i <= tF; ++i) l.push_back({t_delbF[size_t(i)][size_t(m)], -1});
  });
  marginal(eCT_, out.gco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int k = 1; k <= kC; ++k) l.push_back({t_delbP[size_t(k)][size_t(m)], -1});
  });
  marginal(eTC_, out.gco_dir, [&](std::vector<LinTerm>& l, int m) {
    for (int k = 1; k <= kC; ++k) l.push_back({t_delbM[size_t(k)][size_t(m)], -1});
  });
  marginal(eCF_, out.gin, [&](std::vector<LinTerm>& l, int m) {
    for (int c = 1; c <= tTC; ++c) l.push_back({t_delbIn[size_t(c)][size_t(m)], -1});
  });
  marginal(eTF_, out.gin, [&](std::vector<LinTerm>& l, int m) {
    for (int c = tTC + 1; c <= cF; ++c) l.push_back({t_delbIn[size_t(c)][size_t(m)], -1});
  });
  for (int p = 1; p <= rho; ++p)
    for (int m = 1; m <= 3; ++m) {
      std::vector<LinTerm> lhs;
      for (auto& [key, var] : eX_.count)
        if (key.second == p && out.gex[size_t(key.first - 1)].mult == m) lhs.push_back({var, 1});
      for (int X = 0; X < 3; ++X)
        for (int i = 1; i <= tx(X); ++i)
          for (int j : tree(X, i).dsn[size_t(p)])
            lhs.push_back({t_delbX[X][size_t(i)][size_t(j)][size_t(m)], -1});
      M.add_con(F, lhs, 0, 0);
    }

  // final aggregation
  for (size_t g = 0; g < chem.gamma_co.size(); ++g) {
    const EdgeConfig& gamma = chem.gamma_co[g];
    std::vector<LinTerm> lhs{{v_ecco[g], -1}};
    int fwd = out.code_of(out.gco_dir, gamma);
    int rev = out.code_of(out.gco_dir, reversed(gamma));
    for (const EcBlock* blk : {&eC_, &eT_, &eCT_, &eTC_}) {
      if (fwd > 0 && blk->count.count({fwd, 0})) lhs.push_back({blk->count.at({fwd, 0}), 1});
      if (gamma.mu != gamma.xi && rev > 0 && blk->count.count({rev, 0}))
        lhs.push_back({blk->count.at({rev, 0}), 1});
    }
    M.add_con(F, lhs, 0, 0);
  }
  for (size_t g = 0; g < out.gin.size(); ++g) {
    std::vector<LinTerm> lhs{{v_ecin[g], -1}};
    for (const EcBlock* blk : {&eF_, &eCF_, &eTF_})
      if (blk->count.count({int(g) + 1, 0})) lhs.push_back({blk->count.at({int(g) + 1, 0}), 1});
    M.add_con(F, lhs, 0, 0);
  }
  for (size_t g = 0; g < out.gex.size(); ++g) {
    std::vector<LinTerm> lhs{{v_ecex[g], -1}};
    for (int p = 1; p <= rho; ++p)
      if (eX_.count.count({int(g) + 1, p})) lhs.push_back({eX_.count.at({int(g) + 1, p}), 1});
    M.add_con(F, lhs, 0, 0);
  }
}

inline void Builder::family_spec_link() {
  const char* F = "SPEC_link";
  // side constraints: sum coef * atom(P_k) rel rhs, scaled to integers
  for (size_t ci = 0; ci < spec.side.size(); ++ci) {
    const SideConstraint& c = spec.side[ci];
    long long lcm = c.rhs.den;
    for (const auto& term : c.terms) lcm = std::lcm(lcm, term.coef.den);
    std::vector<LinTerm> lhs;
    long long rhs = c.rhs.num * (lcm / c.rhs.den);
    for (const auto& term : c.terms) {
      long long coef = term.coef.num * (lcm / term.coef.den);
      int e = term.edge;
      const SeedEdge& se = spec.seed.edges[size_t(e)];
      int k = se.kind == EdgeKind::Ge2 || se.kind == EdgeKind::Ge1
                  ? P.edge_position[size_t(e)] + 1
                  : 0;
      if (term.kind == SideTerm::Ell) {
        switch (se.kind) {
          case EdgeKind::Eq1:
            rhs -= coef;  // constant length 1
            break;
          case EdgeKind::ZeroOne:
            lhs.push_back({v_eC[size_t(e)], coef});
            break;
          default:
            // length = clrT(k) + dclrT(k) + eC(e)
            lhs.push_back({v_clrT[size_t(k)], coef});
            lhs.push_back({v_dclrT[size_t(k)], coef});
            lhs.push_back({v_eC[size_t(e)], coef});
        }
      } else if (term.kind == SideTerm::Bl) {
        if (k > 0)
          for (int i = 1; i <= tT; ++i) lhs.push_back({v_bl_ki[size_t(k)][size_t(i)], coef});
      } else {  // Na over the interior vertices of the path
        if (k > 0) {
          int a = out.code_of(out.lam_co, term.elem);
          if (a > 0)
            for (int i = 1; i <= tT; ++i) {
              std::string wname = nm("naPk_" + std::to_string(k), i, a);
              int w;
              if (M.has(wname)) {
                w = M.id(wname);
              } else {
                w = M.add_var(wname, 0, 1, F);
                M.add_con(F, {{w, 1}, {v_chiTk[size_t(i)][size_t(k)], -1}}, -1, 0);
                M.add_con(F, {{w, 1}, {t_delaX[1][size_t(i)][0][size_t(a)], -1}}, -1, 0);
                M.add_con(F,
                          {{w, 1}, {v_chiTk[size_t(i)][size_t(k)], -1},
                           {t_delaX[1][size_t(i)][0][size_t(a)], -1}},
                          1, -1);
              }
              lhs.push_back({w, coef});
            }
        }
      }
    }
    M.add_con(F, lhs, c.rel, rhs);
  }

  // pin mode: equality rows fixing every descriptor to x*
  if (!mode.pin) return;
  const FeatureVector& x = mode.x_star;
  auto pin = [&](int var, long long value) { M.add_con(F, {{var, 1}}, 0, value); };
  pin(v_nG, x.n);
  pin(v_cs, x.cs);
  pin(v_chG, x.ch);
  pin(v_blG, x.bl);
  // Mass = ms_bar * n must be integral for a realizable vector
  long long mass_num = x.ms_bar.num * x.n;
  if (mass_num % x.ms_bar.den != 0)
    throw SpecError("pinned average mass is not realizable at the pinned n");
  pin(v_mass, mass_num / x.ms_bar.den);
  pin(v_nH, x.ns_h);
  for (int d = 1; d <= 4; ++d) {
    pin(v_dgco[size_t(d - 1)], x.dg_co[size_t(d - 1)]);
    pin(v_dgnc[size_t(d - 1)], x.dg_nc[size_t(d - 1)]);
  }
  for (int m = 2; m <= 3; ++m) {
    pin(v_bdco[size_t(m - 1)], x.bd_co[size_t(m - 2)]);
    pin(v_bdin[size_t(m - 1)], x.bd_in[size_t(m - 2)]);
    pin(v_bdex[size_t(m - 1)], x.bd_ex[size_t(m - 2)]);
  }
  auto pin_counts = [&](const auto& keys, const std::vector<int>& vars, const auto& counts,
                        const char* what) {
    auto remaining = counts;
    for (size_t i = 0; i < keys.size(); ++i) {
      auto it = remaining.find(keys[i]);
      pin(vars[i], it == remaining.end() ? 0 : it->second);
      if (it != remaining.end()) remaining.erase(it);
    }
    if (!remaining.empty())
      throw SpecError(std::string("pinned feature vector uses a ") + what +
                      " outside the specification alphabet");
  };
  pin_counts(out.ldg_co, v_nsco, x.ns_co, "core symbol");
  pin_counts(out.ldg_nc, v_nsnc, x.ns_nc, "non-core symbol");
  pin_counts(spec.chem.gamma_co, v_ecco, x.ec_co, "core edge-configuration");
  pin_counts(out.gin, v_ecin, x.ec_in, "internal edge-configuration");
  pin_counts(out.gex, v_ecex, x.ec_ex, "external edge-configuration");
}

}  // namespace milpdetail

inline BuiltModel build_model(const TargetSpec& spec, const TargetMode& mode,
                              Objective objective) {
  milpdetail::Builder builder(spec, mode, objective);
  return builder.build();
}

}  // namespace molinfer
