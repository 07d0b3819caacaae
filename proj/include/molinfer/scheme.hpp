#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "molinfer/proper_set.hpp"
#include "molinfer/spec.hpp"

namespace molinfer {

// Sizing integers of the scheme graph, straight from the displayed formulas.
struct SchemeParams {
  int tC = 0, tC_tilde = 0, mC = 0;
  int kC = 0, kC_tilde = 0;
  int tT = 0, tF = 0;
  int dmax = 3, cF = 0;
  std::vector<int> beta_star, delta;  // per seed vertex
  std::vector<int> nC;                // edge count of tree C_i
  int nT = 0, nF = 0;
  int mUB_co = 0, mUB_nc = 0, mUB = 0;
  int ch_tilde_lb = 0, bl_star_lb = 0, bl_star_ub = 0, ell_star_inl = 0;

  // seed edges reordered: ge2 first, then ge1, zero_one, eq1; colors are the
  // positions of the ge2/ge1 block
  std::vector<int> edge_order;        // position -> seed edge index
  std::vector<int> edge_position;     // seed edge index -> position
};

inline int tree_edge_count(int a, int dmax, int rho) {
  // edges of T(a, dmax-1, rho) = a * ((dmax-1)^rho - 1) / (dmax - 2)
  if (a <= 0) return 0;
  int b = dmax - 1;
  long long pw = 1;
  for (int i = 0; i < rho; ++i) pw *= b;
  return int(a * (pw - 1) / (dmax - 2));
}

inline SchemeParams scheme_parameters(const TargetSpec& spec) {
  SchemeParams p;
  const auto& seed = spec.seed;
  int rho = spec.rho();
  p.tC = seed.n_vertices;
  p.mC = int(seed.edges.size());
  for (int v = 0; v < p.tC; ++v)
    if (spec.noncore.bl_v[size_t(v)].ub >= 1) ++p.tC_tilde;
  // the parser orders bl-capable vertices first
  for (int v = 0; v < p.tC_tilde; ++v)
    if (spec.noncore.bl_v[size_t(v)].ub < 1)
      throw std::logic_error("seed vertices not ordered with bl_UB = 1 first");

  auto it = spec.it_edges();
  auto iw = spec.iw_edges();
  auto iz = spec.iz_edges();
  auto iew = spec.iew_edges();
  p.kC_tilde = int(it.size());
  p.kC = int(it.size() + iw.size());
  p.edge_order = it;
  p.edge_order.insert(p.edge_order.end(), iw.begin(), iw.end());
  p.edge_order.insert(p.edge_order.end(), iz.begin(), iz.end());
  p.edge_order.insert(p.edge_order.end(), iew.begin(), iew.end());
  p.edge_position.assign(size_t(p.mC), -1);
  for (int pos = 0; pos < p.mC; ++pos) p.edge_position[size_t(p.edge_order[size_t(pos)])] = pos;

  p.tT = spec.core.cs.ub - p.tC;
  if (p.tT < 0) throw SpecError("cs_UB below |VC|");

  for (int v = 0; v < p.tC; ++v) {
    p.ch_tilde_lb += spec.noncore.ch_v[size_t(v)].lb;
    p.bl_star_lb += spec.noncore.bl_v[size_t(v)].lb;
    p.bl_star_ub += spec.noncore.bl_v[size_t(v)].ub;
    p.ell_star_inl += std::max(spec.noncore.ch_v[size_t(v)].ub - rho, 0);
  }
  for (int e : p.edge_order) {
    const SeedEdge& se = seed.edges[size_t(e)];
    if (se.kind != EdgeKind::Ge2 && se.kind != EdgeKind::Ge1) continue;
    p.ch_tilde_lb += spec.noncore.ch_e[size_t(e)].lb;
    p.bl_star_lb += spec.noncore.bl_e[size_t(e)].lb;
    p.bl_star_ub += spec.noncore.bl_e[size_t(e)].ub;
    p.ell_star_inl +=
        spec.noncore.bl_e[size_t(e)].ub * std::max(spec.noncore.ch_e[size_t(e)].ub - rho, 0);
  }
  p.tF = std::min(spec.noncore.n_star - spec.core.cs.lb -
                      std::max(p.ch_tilde_lb, rho * p.bl_star_lb),
                  p.ell_star_inl);
  p.tF = std::max(p.tF, 0);

  p.dmax = spec.noncore.dg4_nc_ub == 0 ? 3 : 4;
  p.cF = p.tC_tilde + p.tT;

  // beta*_i reserves valence at each seed vertex for its incident mandatory
  // edges (with forced multiplicities on eq1 edges) plus a required branch
  p.beta_star.assign(size_t(p.tC), 0);
  for (size_t i = 0; i < seed.edges.size(); ++i) {
    const SeedEdge& e = seed.edges[i];
    for (int end : {e.u, e.v}) {
      switch (e.kind) {
        case EdgeKind::Ge2:
        case EdgeKind::Ge1:
          p.beta_star[size_t(end)] += 1;
          break;
        case EdgeKind::Eq1:
          p.beta_star[size_t(end)] +=
              1 + spec.chem.bd2[i].lb + 2 * spec.chem.bd3[i].lb;
          break;
        case EdgeKind::ZeroOne:
          break;
      }
    }
  }
  for (int v = 0; v < p.tC; ++v) p.beta_star[size_t(v)] += spec.noncore.bl_v[size_t(v)].lb;
  p.delta.assign(size_t(p.tC), 0);
  p.nC.assign(size_t(p.tC), 0);
  for (int v = 0; v < p.tC; ++v) {
    p.delta[size_t(v)] = 4 - p.beta_star[size_t(v)];
    if (p.delta[size_t(v)] < 0)
      throw SpecError("infeasible spec: reserved valence exceeds 4 at seed vertex u" +
                      std::to_string(v + 1));
    p.nC[size_t(v)] = tree_edge_count(p.delta[size_t(v)], p.dmax, rho);
  }
  p.nT = tree_edge_count(2, p.dmax, rho);
  p.nF = tree_edge_count(p.dmax - 1, p.dmax, rho);

  int rank_seed = p.mC - p.tC + 1;
  int ell_ub_sum = 0;
  for (int e : it) ell_ub_sum += spec.core.ell[size_t(e)].ub;
  for (int e : iw) ell_ub_sum += spec.core.ell[size_t(e)].ub;
  p.mUB_co = std::min(spec.noncore.n_star + rank_seed, p.mC + ell_ub_sum);
  long long tree_total = p.tF;
  for (int v = 0; v < p.tC; ++v) tree_total += p.nC[size_t(v)];
  tree_total += 1LL * p.nT * p.tT + 1LL * p.nF * p.tF - 1;
  p.mUB_nc = int(std::min<long long>(spec.noncore.n_star, std::max<long long>(tree_total, 0)));
  p.mUB = std::min(spec.noncore.n_star + rank_seed, p.mUB_co + p.mUB_nc);
  return p;
}

}  // namespace molinfer
