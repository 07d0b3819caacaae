#pragma once

// Continuation of the model builder: degree, multiplicity, element, bond,
// adjacency-configuration, chemical-symbol and edge-configuration families.
// Included at the end of milp_build.hpp.

namespace molinfer {
namespace milpdetail {

inline void Builder::family_a4() {
  const char* F = "A4_degree";
  for (int X = 0; X < 3; ++X) {
    v_degX[X].assign(size_t(tx(X) + 1), {});
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      v_degX[X][size_t(i)].resize(size_t(tr.n()));
      for (int j = 0; j < tr.n(); ++j)
        v_degX[X][size_t(i)][size_t(j)] =
            M.add_var(nm(std::string("deg") + XN[X], i, j), 0, 4, F);
    }
  }
  v_degCT.resize(size_t(tC));
  v_degTC.resize(size_t(tC));
  v_degCex.resize(size_t(tC));
  for (int i = 0; i < tC; ++i) {
    v_degCT[size_t(i)] = M.add_var(nm("degCT", i + 1), 0, 4, F);
    v_degTC[size_t(i)] = M.add_var(nm("degTC", i + 1), 0, 4, F);
    v_degCex[size_t(i)] = M.add_var(nm("degCex", i + 1), 0, 3, F);
  }
  // ddg indicators and per-depth counters
  std::vector<std::vector<std::vector<int>>> ddg[3];
  for (int X = 0; X < 3; ++X) {
    ddg[X].assign(size_t(tx(X) + 1), {});
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      ddg[X][size_t(i)].assign(size_t(tr.n()), {});
      for (int j = 0; j < tr.n(); ++j) {
        ddg[X][size_t(i)][size_t(j)].resize(5);
        for (int d = 0; d <= 4; ++d)
          ddg[X][size_t(i)][size_t(j)][size_t(d)] =
              M.add_var(nm(std::string("ddg") + XN[X] + "_" + std::to_string(i), j, d), 0, 1, F);
      }
    }
  }
  int nc_cap = std::max(0, nstar - spec.core.cs.lb);
  v_dg.resize(4);
  v_dgco.resize(4);
  v_dgnc.resize(4);
  v_dgC.resize(4);
  v_dgT.resize(4);
  v_dgin.resize(4);
  for (int d = 1; d <= 4; ++d) {
    v_dg[size_t(d - 1)] =
        M.add_var(nm("dg", d), spec.chem.dg[size_t(d - 1)].lb, spec.chem.dg[size_t(d - 1)].ub, F);
    v_dgco[size_t(d - 1)] = M.add_var(nm("dgco", d), 0, spec.core.cs.ub, F);
    long long ub = d == 4 ? std::min(nc_cap, spec.noncore.dg4_nc_ub) : nc_cap;
    v_dgnc[size_t(d - 1)] = M.add_var(nm("dgnc", d), 0, ub, F);
    v_dgC[size_t(d - 1)] = M.add_var(nm("dgCC", d), 0, tC, F);
    v_dgT[size_t(d - 1)] = M.add_var(nm("dgTT", d), 0, std::max(tT, 0), F);
    v_dgin[size_t(d - 1)] = M.add_var(nm("dgin", d), 0, nc_cap, F);
  }
  for (int X = 0; X < 3; ++X) {
    v_dgXp[X].assign(size_t(rho + 1), {});
    for (int p = 1; p <= rho; ++p) {
      v_dgXp[X][size_t(p)].resize(4);
      for (int d = 1; d <= 4; ++d)
        v_dgXp[X][size_t(p)][size_t(d - 1)] =
            M.add_var(nm(std::string("dg") + XN[X] + "p", p, d), 0, nc_cap, F);
    }
  }

  // (Deg_first): degree of fringe vertices
  for (int X = 0; X < 3; ++X)
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      for (int j = 1; j < tr.n(); ++j) {
        std::vector<LinTerm> lhs{{v_vX[X][size_t(i)][size_t(j)], 1},
                                 {v_degX[X][size_t(i)][size_t(j)], -1}};
        for (int h : tr.children[size_t(j)]) lhs.push_back({v_vX[X][size_t(i)][size_t(h)], 1});
        M.add_con(F, lhs, 0, 0);
      }
    }
  // (Deg1)
  for (int i = 0; i < tC; ++i) {
    std::vector<LinTerm> ct{{v_degCT[size_t(i)], -1}}, tc{{v_degTC[size_t(i)], -1}};
    for (int k : colors_at(i, true)) ct.push_back({v_dclrT[size_t(k)], 1});
    for (int k : colors_at(i, false)) tc.push_back({v_dclrT[size_t(k)], 1});
    M.add_con(F, ct, 0, 0);
    M.add_con(F, tc, 0, 0);
    std::vector<LinTerm> ex{{v_degCex[size_t(i)], -1}};
    for (int h : out.treeC[size_t(i)].children[0]) ex.push_back({v_vX[0][size_t(i + 1)][size_t(h)], 1});
    M.add_con(F, ex, 0, 0);
  }
  // (Deg2)/(Deg2b)
  for (int i = 0; i < tC; ++i) {
    std::vector<LinTerm> lhs{{v_tldgm[size_t(i)], 1},  {v_tldgp[size_t(i)], 1},
                             {v_degCT[size_t(i)], 1},  {v_degTC[size_t(i)], 1},
                             {v_degCex[size_t(i)], 1}, {v_degX[0][size_t(i + 1)][0], -1}};
    if (i < tTC) lhs.push_back({v_dclrF[size_t(i + 1)], 1});
    M.add_con(F, lhs, 0, 0);
  }
  // (Deg3)
  for (int i = 1; i <= tT; ++i) {
    std::vector<LinTerm> lhs{{v_vT[size_t(i)], 2},
                             {v_dclrF[size_t(tTC + i)], 1},
                             {v_degX[1][size_t(i)][0], -1}};
    for (int h : out.treeT.children[0]) lhs.push_back({v_vX[1][size_t(i)][size_t(h)], 1});
    M.add_con(F, lhs, 0, 0);
  }
  // (Deg4)
  for (int i = 1; i <= tF; ++i) {
    std::vector<LinTerm> lhs{{v_vF[size_t(i)], 1},
                             {v_eF[size_t(i + 1)], 1},
                             {v_degX[2][size_t(i)][0], -1}};
    for (int h : out.treeF.children[0]) lhs.push_back({v_vX[2][size_t(i)][size_t(h)], 1});
    M.add_con(F, lhs, 0, 0);
  }
  // (Deg5)
  for (int X = 0; X < 3; ++X)
    for (int i = 1; i <= tx(X); ++i)
      for (int j = 0; j < tree(X, i).n(); ++j) {
        std::vector<LinTerm> ones, weight{{v_degX[X][size_t(i)][size_t(j)], -1}};
        for (int d = 0; d <= 4; ++d) {
          ones.push_back({ddg[X][size_t(i)][size_t(j)][size_t(d)], 1});
          if (d > 0) weight.push_back({ddg[X][size_t(i)][size_t(j)][size_t(d)], d});
        }
        M.add_con(F, ones, 0, 1);
        M.add_con(F, weight, 0, 0);
      }
  // (Deg7) per-depth and stratum counters
  for (int X = 0; X < 3; ++X)
    for (int p = 1; p <= rho; ++p)
      for (int d = 1; d <= 4; ++d) {
        std::vector<LinTerm> lhs{{v_dgXp[X][size_t(p)][size_t(d - 1)], -1}};
        for (int i = 1; i <= tx(X); ++i)
          for (int j : tree(X, i).dsn[size_t(p)])
            lhs.push_back({ddg[X][size_t(i)][size_t(j)][size_t(d)], 1});
        M.add_con(F, lhs, 0, 0);
      }
  for (int d = 1; d <= 4; ++d) {
    std::vector<LinTerm> c{{v_dgC[size_t(d - 1)], -1}}, t{{v_dgT[size_t(d - 1)], -1}},
        f{{v_dgin[size_t(d - 1)], -1}};
    for (int i = 1; i <= tC; ++i) c.push_back({ddg[0][size_t(i)][0][size_t(d)], 1});
    for (int i = 1; i <= tT; ++i) t.push_back({ddg[1][size_t(i)][0][size_t(d)], 1});
    for (int i = 1; i <= tF; ++i) f.push_back({ddg[2][size_t(i)][0][size_t(d)], 1});
    M.add_con(F, c, 0, 0);
    M.add_con(F, t, 0, 0);
    M.add_con(F, f, 0, 0);
    std::vector<LinTerm> nc{{v_dgin[size_t(d - 1)], 1}, {v_dgnc[size_t(d - 1)], -1}};
    for (int X = 0; X < 3; ++X)
      for (int p = 1; p <= rho; ++p) nc.push_back({v_dgXp[X][size_t(p)][size_t(d - 1)], 1});
    M.add_con(F, nc, 0, 0);
    M.add_con(F,
              {{v_dgC[size_t(d - 1)], 1}, {v_dgT[size_t(d - 1)], 1}, {v_dgco[size_t(d - 1)], -1}},
              0, 0);
    M.add_con(F,
              {{v_dgco[size_t(d - 1)], 1}, {v_dgnc[size_t(d - 1)], 1}, {v_dg[size_t(d - 1)], -1}},
              0, 0);
  }
}

inline void Builder::family_a5() {
  const char* F = "A5_multiplicity";
  v_bT_edge.resize(size_t(tT + 2));
  v_bF_edge.resize(size_t(tF + 2));
  for (int i = 1; i <= tT + 1; ++i) {
    bool fict = i == 1 || i == tT + 1;
    std::string name = nm("bT", i);
    if (fict && M.has(name)) { v_bT_edge[size_t(i)] = M.id(name); continue; }
    v_bT_edge[size_t(i)] = M.add_var(name, 0, fict ? 0 : 3, F);
  }
  for (int i = 1; i <= tF + 1; ++i) {
    bool fict = i == 1 || i == tF + 1;
    std::string name = nm("bF", i);
    if (fict && M.has(name)) { v_bF_edge[size_t(i)] = M.id(name); continue; }
    v_bF_edge[size_t(i)] = M.add_var(name, 0, fict ? 0 : 3, F);
  }
  for (int i = 0; i < mC; ++i)
    if (spec.seed.edges[size_t(i)].kind != EdgeKind::Ge2)
      v_bC[size_t(i)] = M.add_var(nm("bC", i + 1), 0, 3, F);
  for (int X = 0; X < 3; ++X) {
    v_bX[X].assign(size_t(tx(X) + 1), {});
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      v_bX[X][size_t(i)].resize(size_t(tr.n()));
      for (int j = 1; j < tr.n(); ++j)
        v_bX[X][size_t(i)][size_t(j)] = M.add_var(nm(std::string("b") + XN[X] + "t", i, j), 0, 3, F);
    }
  }
  v_betaP.resize(size_t(kC + 1));
  v_betaM.resize(size_t(kC + 1));
  for (int k = 1; k <= kC; ++k) {
    v_betaP[size_t(k)] = M.add_var(nm("betaP", k), 0, 3, F);
    v_betaM[size_t(k)] = M.add_var(nm("betaM", k), 0, 3, F);
  }
  v_betaIn.resize(size_t(cF + 1));
  for (int c = 1; c <= cF; ++c) v_betaIn[size_t(c)] = M.add_var(nm("betaIn", c), 0, 3, F);

  auto del_block = [&](const std::string& base, int idx, int var) {
    std::vector<int> dl(4);
    std::vector<LinTerm> ones, weight{{var, -1}};
    for (int m = 0; m <= 3; ++m) {
      dl[size_t(m)] = M.add_var(nm(base, idx, m), 0, 1, F);
      ones.push_back({dl[size_t(m)], 1});
      if (m > 0) weight.push_back({dl[size_t(m)], m});
    }
    M.add_con(F, ones, 0, 1);
    M.add_con(F, weight, 0, 0);
    return dl;
  };
  t_delbT.assign(size_t(tT + 2), {});
  for (int i = 2; i <= tT; ++i) t_delbT[size_t(i)] = del_block("delbT", i, v_bT_edge[size_t(i)]);
  t_delbF.assign(size_t(tF + 2), {});
  for (int i = 2; i <= tF; ++i) t_delbF[size_t(i)] = del_block("delbF", i, v_bF_edge[size_t(i)]);
  t_delbC.assign(size_t(mC), {});
  for (int i = 0; i < mC; ++i)
    if (v_bC[size_t(i)] >= 0) t_delbC[size_t(i)] = del_block("delbC", i + 1, v_bC[size_t(i)]);
  for (int X = 0; X < 3; ++X) {
    t_delbX[X].assign(size_t(tx(X) + 1), {});
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      t_delbX[X][size_t(i)].assign(size_t(tr.n()), {});
      for (int j = 1; j < tr.n(); ++j)
        t_delbX[X][size_t(i)][size_t(j)] = del_block(
            std::string("delb") + XN[X] + "t_" + std::to_string(i), j, v_bX[X][size_t(i)][size_t(j)]);
    }
  }
  t_delbP.assign(size_t(kC + 1), {});
  t_delbM.assign(size_t(kC + 1), {});
  for (int k = 1; k <= kC; ++k) {
    t_delbP[size_t(k)] = del_block("delbP", k, v_betaP[size_t(k)]);
    t_delbM[size_t(k)] = del_block("delbM", k, v_betaM[size_t(k)]);
  }
  t_delbIn.assign(size_t(cF + 1), {});
  for (int c = 1; c <= cF; ++c) t_delbIn[size_t(c)] = del_block("delbIn", c, v_betaIn[size_t(c)]);

  // coupling with the selection variables
  for (int i = 0; i < mC; ++i)
    if (v_bC[size_t(i)] >= 0) {
      M.add_con(F, {{v_bC[size_t(i)], 1}, {v_eC[size_t(i)], -1}}, 1, 0);
      M.add_con(F, {{v_bC[size_t(i)], 1}, {v_eC[size_t(i)], -3}}, -1, 0);
    }
  for (int i = 2; i <= tT; ++i) {
    M.add_con(F, {{v_bT_edge[size_t(i)], 1}, {v_eT[size_t(i)], -1}}, 1, 0);
    M.add_con(F, {{v_bT_edge[size_t(i)], 1}, {v_eT[size_t(i)], -3}}, -1, 0);
  }
  for (int i = 2; i <= tF; ++i) {
    M.add_con(F, {{v_bF_edge[size_t(i)], 1}, {v_eF[size_t(i)], -1}}, 1, 0);
    M.add_con(F, {{v_bF_edge[size_t(i)], 1}, {v_eF[size_t(i)], -3}}, -1, 0);
  }
  for (int X = 0; X < 3; ++X)
    for (int i = 1; i <= tx(X); ++i)
      for (int j = 1; j < tree(X, i).n(); ++j) {
        M.add_con(F, {{v_bX[X][size_t(i)][size_t(j)], 1}, {v_vX[X][size_t(i)][size_t(j)], -1}}, 1, 0);
        M.add_con(F, {{v_bX[X][size_t(i)][size_t(j)], 1}, {v_vX[X][size_t(i)][size_t(j)], -3}}, -1,
                  0);
      }
  for (int k = 1; k <= kC; ++k) {
    M.add_con(F, {{v_betaP[size_t(k)], 1}, {v_dclrT[size_t(k)], -1}}, 1, 0);
    M.add_con(F, {{v_betaP[size_t(k)], 1}, {v_dclrT[size_t(k)], -3}}, -1, 0);
    M.add_con(F, {{v_betaM[size_t(k)], 1}, {v_dclrT[size_t(k)], -1}}, 1, 0);
    M.add_con(F, {{v_betaM[size_t(k)], 1}, {v_dclrT[size_t(k)], -3}}, -1, 0);
  }
  for (int c = 1; c <= cF; ++c) {
    M.add_con(F, {{v_betaIn[size_t(c)], 1}, {v_dclrF[size_t(c)], -1}}, 1, 0);
    M.add_con(F, {{v_betaIn[size_t(c)], 1}, {v_dclrF[size_t(c)], -3}}, -1, 0);
  }

  // bond-count descriptors
  v_bd.resize(3);
  v_bdco.resize(3);
  v_bdin.resize(3);
  v_bdex.resize(3);
  for (int m = 1; m <= 3; ++m) {
    v_bd[size_t(m - 1)] = M.add_var(nm("bd", m), 0, P.mUB, F);
    v_bdco[size_t(m - 1)] = M.add_var(nm("bdcoS", m), 0, P.mUB_co, F);
    v_bdin[size_t(m - 1)] = M.add_var(nm("bdinS", m), 0, P.mUB_nc, F);
    v_bdex[size_t(m - 1)] = M.add_var(nm("bdexS", m), 0, nstar, F);
  }
  std::map<std::string, std::vector<int>> bdX;
  for (const char* nmX : {"C", "T", "CT", "TC", "F", "CF", "TF"}) {
    std::string key(nmX);
    bool core_family = key == "C" || key == "T" || key == "CT" || key == "TC";
    std::vector<int> ids(3);
    for (int m = 1; m <= 3; ++m)
      ids[size_t(m - 1)] =
          M.add_var(nm("bdX" + key, m), 0, core_family ? P.mUB_co : P.mUB_nc, F);
    bdX[key] = ids;
  }
  std::vector<std::vector<std::vector<int>>> bdXp(3);
  for (int X = 0; X < 3; ++X) {
    bdXp[size_t(X)].assign(size_t(rho + 1), {});
    for (int p = 1; p <= rho; ++p) {
      bdXp[size_t(X)][size_t(p)].resize(3);
      for (int m = 1; m <= 3; ++m)
        bdXp[size_t(X)][size_t(p)][size_t(m - 1)] =
            M.add_var(nm(std::string("bd") + XN[X] + "p", p, m), 0, nstar, F);
    }
  }
  // (beta16)
  for (int X = 0; X < 3; ++X)
    for (int p = 1; p <= rho; ++p)
      for (int m = 1; m <= 3; ++m) {
        std::vector<LinTerm> lhs{{bdXp[size_t(X)][size_t(p)][size_t(m - 1)], -1}};
        for (int i = 1; i <= tx(X); ++i)
          for (int j : tree(X, i).dsn[size_t(p)])
            lhs.push_back({t_delbX[X][size_t(i)][size_t(j)][size_t(m)], 1});
        M.add_con(F, lhs, 0, 0);
      }
  // (beta_last)
  for (int m = 1; m <= 3; ++m) {
    auto sum_into = [&](int target, auto&& collect) {
      std::vector<LinTerm> lhs{{target, -1}};
      collect(lhs);
      M.add_con(F, lhs, 0, 0);
    };
    sum_into(bdX["C"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int i = 0; i < mC; ++i)
        if (!t_delbC[size_t(i)].empty()) l.push_back({t_delbC[size_t(i)][size_t(m)], 1});
    });
    sum_into(bdX["T"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int i = 2; i <= tT; ++i) l.push_back({t_delbT[size_t(i)][size_t(m)], 1});
    });
    sum_into(bdX["CT"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int k = 1; k <= kC; ++k) l.push_back({t_delbP[size_t(k)][size_t(m)], 1});
    });
    sum_into(bdX["TC"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int k = 1; k <= kC; ++k) l.push_back({t_delbM[size_t(k)][size_t(m)], 1});
    });
    M.add_con(F,
              {{bdX["C"][size_t(m - 1)], 1},
               {bdX["T"][size_t(m - 1)], 1},
               {bdX["CT"][size_t(m - 1)], 1},
               {bdX["TC"][size_t(m - 1)], 1},
               {v_bdco[size_t(m - 1)], -1}},
              0, 0);
    sum_into(bdX["F"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int i = 2; i <= tF; ++i) l.push_back({t_delbF[size_t(i)][size_t(m)], 1});
    });
    sum_into(bdX["CF"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int c = 1; c <= tTC; ++c) l.push_back({t_delbIn[size_t(c)][size_t(m)], 1});
    });
    sum_into(bdX["TF"][size_t(m - 1)], [&](std::vector<LinTerm>& l) {
      for (int c = tTC + 1; c <= cF; ++c) l.push_back({t_delbIn[size_t(c)][size_t(m)], 1});
    });
    M.add_con(F,
              {{bdX["F"][size_t(m - 1)], 1},
               {bdX["TF"][size_t(m - 1)], 1},
               {bdX["CF"][size_t(m - 1)], 1},
               {v_bdin[size_t(m - 1)], -1}},
              0, 0);
    std::vector<LinTerm> ex{{v_bdex[size_t(m - 1)], -1}};
    for (int X = 0; X < 3; ++X)
      for (int p = 1; p <= rho; ++p) ex.push_back({bdXp[size_t(X)][size_t(p)][size_t(m - 1)], 1});
    M.add_con(F, ex, 0, 0);
    M.add_con(F,
              {{v_bdco[size_t(m - 1)], 1},
               {v_bdin[size_t(m - 1)], 1},
               {v_bdex[size_t(m - 1)], 1},
               {v_bd[size_t(m - 1)], -1}},
              0, 0);
  }
}

inline void Builder::family_a6() {
  const char* F = "A6_element_valence";
  const auto& chem = spec.chem;
  int nco = int(out.lam_co.size()), nnc = int(out.lam_nc.size());

  v_bCT.resize(size_t(tT + 1));
  v_bTC.resize(size_t(tT + 1));
  for (int i = 1; i <= tT; ++i) {
    v_bCT[size_t(i)] = M.add_var(nm("bCT", i), 0, 3, F);
    v_bTC[size_t(i)] = M.add_var(nm("bTC", i), 0, 3, F);
  }
  v_bCF.resize(size_t(tF + 1));
  v_bTF.resize(size_t(tF + 1));
  for (int i = 1; i <= tF; ++i) {
    v_bCF[size_t(i)] = M.add_var(nm("bCF", i), 0, 3, F);
    v_bTF[size_t(i)] = M.add_var(nm("bTF", i), 0, 3, F);
  }
  // element variables and indicator blocks
  for (int X = 0; X < 3; ++X) {
    v_aX[X].assign(size_t(tx(X) + 1), {});
    t_delaX[X].assign(size_t(tx(X) + 1), {});
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      v_aX[X][size_t(i)].resize(size_t(tr.n()));
      t_delaX[X][size_t(i)].assign(size_t(tr.n()), {});
      for (int j = 0; j < tr.n(); ++j) {
        bool core_slot = X != 2 && j == 0;
        int ncodes = core_slot ? nco : nnc;
        v_aX[X][size_t(i)][size_t(j)] =
            M.add_var(nm(std::string("a") + XN[X], i, j), 0, ncodes, F);
        auto& dl = t_delaX[X][size_t(i)][size_t(j)];
        dl.resize(size_t(ncodes) + 1);
        std::vector<LinTerm> ones, weight{{v_aX[X][size_t(i)][size_t(j)], -1}};
        for (int a = 0; a <= ncodes; ++a) {
          dl[size_t(a)] =
              M.add_var(nm(std::string("dela") + XN[X] + "_" + std::to_string(i), j, a), 0, 1, F);
          ones.push_back({dl[size_t(a)], 1});
          if (a > 0) weight.push_back({dl[size_t(a)], a});
        }
        M.add_con(F, ones, 0, 1);
        M.add_con(F, weight, 0, 0);
      }
    }
  }

  // (alpha_first1): bCT/bTC pinned to betaP/betaM at run boundaries
  for (int k = 1; k <= kC; ++k)
    for (int i = 1; i <= tT; ++i) {
      // bCT(i) <= betaP(k) + 3(eT(i) - chiTk(i,k) + 1) and >= ... - 3(...)
      M.add_con(F,
                {{v_bCT[size_t(i)], 1}, {v_betaP[size_t(k)], -1}, {v_eT[size_t(i)], -3},
                 {v_chiTk[size_t(i)][size_t(k)], 3}},
                -1, 3);
      M.add_con(F,
                {{v_bCT[size_t(i)], 1}, {v_betaP[size_t(k)], -1}, {v_eT[size_t(i)], 3},
                 {v_chiTk[size_t(i)][size_t(k)], -3}},
                1, -3);
      M.add_con(F,
                {{v_bTC[size_t(i)], 1}, {v_betaM[size_t(k)], -1}, {v_eT[size_t(i + 1)], -3},
                 {v_chiTk[size_t(i)][size_t(k)], 3}},
                -1, 3);
      M.add_con(F,
                {{v_bTC[size_t(i)], 1}, {v_betaM[size_t(k)], -1}, {v_eT[size_t(i + 1)], 3},
                 {v_chiTk[size_t(i)][size_t(k)], -3}},
                1, -3);
    }
  // (alpha2): bCF/bTF pinned to betaIn at run starts
  for (int i = 1; i <= tF; ++i) {
    for (int c = 1; c <= tTC; ++c) {
      M.add_con(F,
                {{v_bCF[size_t(i)], 1}, {v_betaIn[size_t(c)], -1}, {v_eF[size_t(i)], -3},
                 {v_chiFc[size_t(i)][size_t(c)], 3}},
                -1, 3);
      M.add_con(F,
                {{v_bCF[size_t(i)], 1}, {v_betaIn[size_t(c)], -1}, {v_eF[size_t(i)], 3},
                 {v_chiFc[size_t(i)][size_t(c)], -3}},
                1, -3);
    }
    for (int c = tTC + 1; c <= cF; ++c) {
      M.add_con(F,
                {{v_bTF[size_t(i)], 1}, {v_betaIn[size_t(c)], -1}, {v_eF[size_t(i)], -3},
                 {v_chiFc[size_t(i)][size_t(c)], 3}},
                -1, 3);
      M.add_con(F,
                {{v_bTF[size_t(i)], 1}, {v_betaIn[size_t(c)], -1}, {v_eF[size_t(i)], 3},
                 {v_chiFc[size_t(i)][size_t(c)], -3}},
                1, -3);
    }
  }

  // valence conditions
  for (int i = 0; i < tC; ++i) {
    std::vector<LinTerm> lhs;
    for (int e : direct_edges_at(i, true)) lhs.push_back({v_bC[size_t(e)], 1});
    for (int e : direct_edges_at(i, false)) lhs.push_back({v_bC[size_t(e)], 1});
    for (int k : colors_at(i, true)) lhs.push_back({v_betaP[size_t(k)], 1});
    for (int k : colors_at(i, false)) lhs.push_back({v_betaM[size_t(k)], 1});
    if (i < tTC) lhs.push_back({v_betaIn[size_t(i + 1)], 1});
    for (int h : out.treeC[size_t(i)].children[0]) lhs.push_back({v_bX[0][size_t(i + 1)][size_t(h)], 1});
    for (int a = 1; a <= nco; ++a)
      lhs.push_back({t_delaX[0][size_t(i + 1)][0][size_t(a)],
                     -val(out.lam_co[size_t(a - 1)])});
    M.add_con(F, lhs, -1, 0);
  }
  for (int i = 1; i <= tT; ++i) {
    std::vector<LinTerm> lhs{{v_bT_edge[size_t(i)], 1},  {v_bT_edge[size_t(i + 1)], 1},
                             {v_bCT[size_t(i)], 1},      {v_bTC[size_t(i)], 1},
                             {v_betaIn[size_t(tTC + i)], 1}};
    for (int h : out.treeT.children[0]) lhs.push_back({v_bX[1][size_t(i)][size_t(h)], 1});
    for (int a = 1; a <= nco; ++a)
      lhs.push_back({t_delaX[1][size_t(i)][0][size_t(a)], -val(out.lam_co[size_t(a - 1)])});
    M.add_con(F, lhs, -1, 0);
  }
  for (int i = 1; i <= tF; ++i) {
    std::vector<LinTerm> lhs{{v_bF_edge[size_t(i)], 1},
                             {v_bF_edge[size_t(i + 1)], 1},
                             {v_bCF[size_t(i)], 1},
                             {v_bTF[size_t(i)], 1}};
    for (int h : out.treeF.children[0]) lhs.push_back({v_bX[2][size_t(i)][size_t(h)], 1});
    for (int a = 1; a <= nnc; ++a)
      lhs.push_back({t_delaX[2][size_t(i)][0][size_t(a)], -val(out.lam_nc[size_t(a - 1)])});
    M.add_con(F, lhs, -1, 0);
  }
  for (int X = 0; X < 3; ++X)
    for (int i = 1; i <= tx(X); ++i) {
      const Tabc& tr = tree(X, i);
      for (int j = 1; j < tr.n(); ++j) {
        std::vector<LinTerm> lhs{{v_bX[X][size_t(i)][size_t(j)], 1}};
        for (int h : tr.children[size_t(j)]) lhs.push_back({v_bX[X][size_t(i)][size_t(h)], 1});
        for (int a = 1; a <= nnc; ++a)
          lhs.push_back({t_delaX[X][size_t(i)][size_t(j)][size_t(a)],
                         -val(out.lam_nc[size_t(a - 1)])});
        M.add_con(F, lhs, -1, 0);
      }
    }

  // element counts
  auto elem_bounds = [&](const std::map<int, Bounds>& m, int elem) {
    return bounds_or(m, elem, Bounds{0, nstar});
  };
  v_naC.resize(size_t(nco));
  v_naT.resize(size_t(nco));
  v_naco.resize(size_t(nco));
  for (int a = 1; a <= nco; ++a) {
    int elem = out.lam_co[size_t(a - 1)];
    Bounds b = elem_bounds(chem.na_co, elem);
    v_naC[size_t(a - 1)] = M.add_var(nm("naC", a), 0, tC, F);
    v_naT[size_t(a - 1)] = M.add_var(nm("naT", a), 0, std::max(tT, 0), F);
    v_naco[size_t(a - 1)] = M.add_var(nm("naco", a), b.lb, b.ub, F);
    std::vector<LinTerm> cc{{v_naC[size_t(a - 1)], -1}}, tt{{v_naT[size_t(a - 1)], -1}};
    for (int i = 1; i <= tC; ++i) cc.push_back({t_delaX[0][size_t(i)][0][size_t(a)], 1});
    for (int i = 1; i <= tT; ++i) tt.push_back({t_delaX[1][size_t(i)][0][size_t(a)], 1});
    M.add_con(F, cc, 0, 0);
    M.add_con(F, tt, 0, 0);
    M.add_con(F,
              {{v_naC[size_t(a - 1)], 1}, {v_naT[size_t(a - 1)], 1}, {v_naco[size_t(a - 1)], -1}},
              0, 0);
  }
  v_nain.resize(size_t(nnc));
  v_nanc.resize(size_t(nnc));
  for (int X = 0; X < 3; ++X) v_naXp[X].assign(size_t(rho + 1), std::vector<int>(size_t(nnc)));
  for (int a = 1; a <= nnc; ++a) {
    int elem = out.lam_nc[size_t(a - 1)];
    Bounds b = elem_bounds(chem.na_nc, elem);
    v_nain[size_t(a - 1)] = M.add_var(nm("nain", a), 0, nstar, F);
    v_nanc[size_t(a - 1)] = M.add_var(nm("nanc", a), b.lb, b.ub, F);
    std::vector<LinTerm> ff{{v_nain[size_t(a - 1)], -1}};
    for (int i = 1; i <= tF; ++i) ff.push_back({t_delaX[2][size_t(i)][0][size_t(a)], 1});
    M.add_con(F, ff, 0, 0);
    std::vector<LinTerm> total{{v_nain[size_t(a - 1)], 1}, {v_nanc[size_t(a - 1)], -1}};
    for (int X = 0; X < 3; ++X)
      for (int p = 1; p <= rho; ++p) {
        v_naXp[X][size_t(p)][size_t(a - 1)] =
            M.add_var(nm(std::string("na") + XN[X] + "p", p, a), 0, nstar, F);
        std::vector<LinTerm> lhs{{v_naXp[X][size_t(p)][size_t(a - 1)], -1}};
        for (int i = 1; i <= tx(X); ++i)
          for (int j : tree(X, i).dsn[size_t(p)])
            lhs.push_back({t_delaX[X][size_t(i)][size_t(j)][size_t(a)], 1});
        M.add_con(F, lhs, 0, 0);
        total.push_back({v_naXp[X][size_t(p)][size_t(a - 1)], 1});
      }
    M.add_con(F, total, 0, 0);
  }
  // global per-element counts over Lambda
  std::vector<int> lam_all = chem.lambda;
  std::sort(lam_all.begin(), lam_all.end(),
            [&](int a, int b) { return chem.table.less(a, b); });
  v_na.resize(lam_all.size());
  for (size_t idx = 0; idx < lam_all.size(); ++idx) {
    int elem = lam_all[idx];
    Bounds b = elem_bounds(chem.na, elem);
    v_na[idx] = M.add_var(nm("na", int(idx) + 1), b.lb, b.ub, F);
    std::vector<LinTerm> lhs{{v_na[idx], -1}};
    int cco = out.code_of(out.lam_co, elem);
    int cnc = out.code_of(out.lam_nc, elem);
    if (cco > 0) lhs.push_back({v_naco[size_t(cco - 1)], 1});
    if (cnc > 0) lhs.push_back({v_nanc[size_t(cnc - 1)], 1});
    M.add_con(F, lhs, 0, 0);
  }
  // Mass and hydrogen count
  long long mass_ub = 0;
  for (int e : lam_all) mass_ub = std::max<long long>(mass_ub, chem.table.mass_star(e));
  v_mass = M.add_var("Mass", 0, mass_ub * nstar, F);
  {
    std::vector<LinTerm> lhs{{v_mass, -1}};
    for (size_t idx = 0; idx < lam_all.size(); ++idx)
      lhs.push_back({v_na[idx], chem.table.mass_star(lam_all[idx])});
    M.add_con(F, lhs, 0, 0);
  }
  v_nH = M.add_var("n_H", 0, 4LL * nstar, F);
  {
    std::vector<LinTerm> lhs{{v_nH, -1}};
    for (size_t idx = 0; idx < lam_all.size(); ++idx)
      lhs.push_back({v_na[idx], chem.table.valence(lam_all[idx])});
    for (int m = 1; m <= 3; ++m) {
      lhs.push_back({v_bdco[size_t(m - 1)], -2 * m});
      lhs.push_back({v_bdin[size_t(m - 1)], -2 * m});
      lhs.push_back({v_bdex[size_t(m - 1)], -2 * m});
    }
    M.add_con(F, lhs, 0, 0);
  }
  // (alpha_last) allowed elements per seed vertex
  for (int i = 0; i < tC; ++i) {
    std::vector<LinTerm> lhs;
    for (int elem : chem.lambda_star[size_t(i)]) {
      int a = out.code_of(out.lam_co, elem);
      if (a > 0) lhs.push_back({t_delaX[0][size_t(i + 1)][0][size_t(a)], 1});
    }
    M.add_con(F, lhs, 0, 1);
  }
}

inline void Builder::family_a7() {
  const char* F = "A7_bond_bounds";
  // fixed-length edges: bounds apply to the single edge's multiplicity flags
  for (int i = 0; i < mC; ++i) {
    const SeedEdge& e = spec.seed.edges[size_t(i)];
    if (e.kind != EdgeKind::ZeroOne && e.kind != EdgeKind::Eq1) continue;
    for (int m = 2; m <= 3; ++m) {
      const Bounds& b = m == 2 ? spec.chem.bd2[size_t(i)] : spec.chem.bd3[size_t(i)];
      M.add_con(F, {{t_delbC[size_t(i)][size_t(m)], 1}}, 1, b.lb);
      M.add_con(F, {{t_delbC[size_t(i)][size_t(m)], 1}}, -1, b.ub);
    }
  }
  // colored paths
  std::vector<std::vector<std::vector<int>>> bdT(size_t(kC + 1));
  for (int k = 1; k <= kC; ++k) {
    bdT[size_t(k)].assign(size_t(tT + 1), {});
    for (int i = 2; i <= tT; ++i) {
      bdT[size_t(k)][size_t(i)].resize(4);
      for (int m = 2; m <= 3; ++m)
        bdT[size_t(k)][size_t(i)][size_t(m)] =
            M.add_var(nm("bdTk_" + std::to_string(k), i, m), 0, 1, F);
    }
  }
  for (int k = 1; k <= kC; ++k)
    for (int i = 2; i <= tT; ++i)
      for (int m = 2; m <= 3; ++m)
        M.add_con(F,
                  {{bdT[size_t(k)][size_t(i)][size_t(m)], 1},
                   {t_delbT[size_t(i)][size_t(m)], -1},
                   {v_chiTk[size_t(i)][size_t(k)], -1}},
                  1, -1);
  for (int m = 2; m <= 3; ++m) {
    std::vector<LinTerm> lhs;
    for (int i = 2; i <= tT; ++i) lhs.push_back({t_delbT[size_t(i)][size_t(m)], 1});
    for (int k = 1; k <= kC; ++k)
      for (int i = 2; i <= tT; ++i) lhs.push_back({bdT[size_t(k)][size_t(i)][size_t(m)], -1});
    M.add_con(F, lhs, 1, 0);
  }
  for (int k = 1; k <= kC; ++k) {
    int e = color_edge(k);
    for (int m = 2; m <= 3; ++m) {
      const Bounds& b = m == 2 ? spec.chem.bd2[size_t(e)] : spec.chem.bd3[size_t(e)];
      std::vector<LinTerm> lhs{{t_delbP[size_t(k)][size_t(m)], 1},
                               {t_delbM[size_t(k)][size_t(m)], 1}};
      for (int i = 2; i <= tT; ++i) lhs.push_back({bdT[size_t(k)][size_t(i)][size_t(m)], 1});
      // a ge1 edge used directly realizes the path as its own single edge
      if (spec.seed.edges[size_t(e)].kind == EdgeKind::Ge1)
        lhs.push_back({t_delbC[size_t(e)][size_t(m)], 1});
      M.add_con(F, lhs, 1, b.lb);
      M.add_con(F, lhs, -1, b.ub);
    }
  }
}

}  // namespace milpdetail
}  // namespace molinfer

#include "molinfer/milp_build_desc.hpp"
