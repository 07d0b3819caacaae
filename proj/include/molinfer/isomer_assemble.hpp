#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "molinfer/isomer_dp.hpp"
#include "molinfer/isomorphism.hpp"

namespace molinfer {

// Feasible vector pair at a base edge: two half-components whose vectors plus
// one bridging configuration reproduce the edge budget exactly.
struct FeasiblePair {
  FrequencyVector w1, w2;
  EdgeConfig gamma;  // normalized bridging configuration
  int mult = 1;
  int h1 = 0, h2 = 0;
  BigUint count1, count2;
  std::vector<TreePtr> samples1, samples2;
  bool self_paired = false;  // interchangeable sides with identical half states
};

// Step-4 state for one side of a base edge.
struct SideSets {
  int delta_q = 0;  // number of backbone edges this side covers
  std::map<DpKey, VecSet> sets;  // final-q sets keyed (a, d, m, h)
};

namespace isodetail {

// bi-rooted splice for step 4: new outermost backbone vertex `a` with its
// pendant tree, previous side tree attached below it
inline TreePtr splice_backbone(const RootedTree& pendant, const RootedTree& prev, int mm) {
  RootedTree t = pendant;  // rooted c-tree at the new vertex
  t.nc = false;
  int offset = t.n();
  for (size_t j = 0; j < prev.nodes.size(); ++j) {
    RootedTree::Node nd = prev.nodes[j];
    if (j == 0) {
      nd.parent = 0;
      nd.beta = mm;
    } else {
      nd.parent += offset;
    }
    t.nodes.push_back(nd);
  }
  t.r2 = prev.r2 + offset;
  return std::make_shared<RootedTree>(std::move(t));
}

}  // namespace isodetail

// Step 4: grow one side of a base edge outward from its end vertex.
inline SideSets step4_side(DpRun& run, const EdgeEndCode& end, int delta_q, Bounds ch_e) {
  SideSets side;
  side.delta_q = delta_q;
  // q = 0: the bare end vertex
  {
    RootedTree bare;
    bare.nc = false;
    bare.nodes.push_back({end.elem, -1, 0});
    VecSet vs;
    run.store(vs, FrequencyVector{}, BigUint(1), std::make_shared<RootedTree>(bare));
    side.sets[{end.elem, 0, 0, 0}] = std::move(vs);
  }
  const ElementTable& t = run.table();
  for (int q = 1; q <= delta_q; ++q) {
    std::map<DpKey, VecSet> next;
    for (const auto& [kp, setp] : side.sets) {
      // previous side root: element b with degree d' (bumped by +1 when the
      // new backbone edge attaches); at q=1 the bare end uses its edge code
      {
        for (const auto& [kc, setc] : run.co0[2]) {
          int a = kc.elem, d = kc.d + 1, msub = kc.m;
          int va = t.valence(a);
          if (d > std::min(va, run.dmax()) - 1) continue;
          std::vector<int> mults;
          if (q == 1) {
            mults.push_back(end.mult);
          } else {
            for (int mm = 1; mm <= std::min(3, t.valence(kp.elem) - kp.m); ++mm)
              mults.push_back(mm);
          }
          for (int mm : mults) {
            if (mm < 1 || mm > 3) continue;
            int m = msub + mm;
            if (m < d || m > va - 1) continue;
            ChemSym bsym = q == 1 ? ChemSym{end.elem, 1 + end.delta}
                                  : ChemSym{kp.elem, kp.d + 1};
            EdgeConfig gamma = normalized(t, {{a, d + 1}, bsym, mm});
            SigKey gk = key_co(gamma);
            if (run.budget().at(gk) < 1) continue;
            for (const auto& [wc, ec] : setc.entries) {
              for (const auto& [wp, ep] : setp.entries) {
                FrequencyVector w = wc + wp;
                w.add(gk, 1);
                if (!w.leq(run.budget())) continue;
                int h = std::max(kp.h, kc.h);
                if (h > ch_e.ub) continue;
                BigUint cnt = ec.count * ep.count;
                TreePtr sample;
                if (!ec.samples.empty() && !ep.samples.empty())
                  sample = isodetail::splice_backbone(*ec.samples.front(), *ep.samples.front(), mm);
                auto& dst = next[{a, d, m, h}];
                // splice additional sample pairs up to the cap
                bool first = true;
                for (const auto& sc : ec.samples) {
                  for (const auto& sp : ep.samples) {
                    if (first) { first = false; continue; }
                    run.store(dst, w, BigUint(0),
                              isodetail::splice_backbone(*sc, *sp, mm));
                  }
                }
                run.store(dst, w, cnt, sample);
              }
            }
          }
        }
      }
    }
    side.sets = std::move(next);
  }
  return side;
}

// Step 5: sorted-merge pairing of the two sides of a base edge.
inline std::vector<FeasiblePair> step5_pairs(DpRun& run, const EdgeCode& code,
                                             const SideSets& s1, const SideSets& s2,
                                             Bounds ch_e, bool interchangeable) {
  const ElementTable& t = run.table();
  std::vector<FeasiblePair> pairs;
  for (const auto& [k1, set1] : s1.sets) {
    for (const auto& [k2, set2] : s2.sets) {
      // bridging edge chemistry; bare sides use their edge-code symbol and
      // pin the multiplicity
      bool bare1 = s1.delta_q == 0, bare2 = s2.delta_q == 0;
      ChemSym sym1 = bare1 ? ChemSym{code.end[0].elem, 1 + code.end[0].delta}
                           : ChemSym{k1.elem, k1.d + 1};
      ChemSym sym2 = bare2 ? ChemSym{code.end[1].elem, 1 + code.end[1].delta}
                           : ChemSym{k2.elem, k2.d + 1};
      int mcap = std::min(bare1 ? 3 : t.valence(k1.elem) - k1.m,
                          bare2 ? 3 : t.valence(k2.elem) - k2.m);
      for (int mm = 1; mm <= std::min(3, mcap); ++mm) {
        if (bare1 && mm != code.end[0].mult) continue;
        if (bare2 && mm != code.end[1].mult) continue;
        EdgeConfig gamma = normalized(t, {sym1, sym2, mm});
        SigKey gk = key_co(gamma);
        if (run.budget().at(gk) < 1) continue;
        int h = std::max(k1.h, k2.h);
        if (h < ch_e.lb || h > ch_e.ub) continue;
        // complement the side-2 vectors, then merge two sorted sequences
        std::map<FrequencyVector, std::pair<const FrequencyVector*, const VecEntry*>> complements;
        for (const auto& [w2, e2] : set2.entries) {
          FrequencyVector need = w2;
          need.add(gk, 1);
          auto cmpl = need.complement_in(run.budget());
          if (cmpl) complements.emplace(std::move(*cmpl), std::make_pair(&w2, &e2));
        }
        auto it1 = set1.entries.begin();
        auto it2 = complements.begin();
        while (it1 != set1.entries.end() && it2 != complements.end()) {
          if (it1->first < it2->first) {
            ++it1;
          } else if (it2->first < it1->first) {
            ++it2;
          } else {
            const FrequencyVector& w1 = it1->first;
            const FrequencyVector& w2 = *it2->second.first;
            // on interchangeable sides each unordered pair of half states is
            // kept once, ordered by (key, vector)
            bool keep = true;
            if (interchangeable) {
              if (k2 < k1 || (k1 == k2 && w2 < w1)) keep = false;
            }
            if (keep) {
              FeasiblePair p;
              p.w1 = w1;
              p.w2 = w2;
              p.gamma = gamma;
              p.mult = mm;
              p.h1 = k1.h;
              p.h2 = k2.h;
              p.count1 = it1->second.count;
              p.count2 = it2->second.second->count;
              p.samples1 = it1->second.samples;
              p.samples2 = it2->second.second->samples;
              p.self_paired = interchangeable && k1 == k2 && !(w1 < w2) && !(w2 < w1);
              pairs.push_back(std::move(p));
            }
            ++it1;
            ++it2;
          }
        }
      }
    }
  }
  return pairs;
}

// exact-when-uncapped count of the target components a pair list certifies
inline BigUint pair_count_bound(const std::vector<FeasiblePair>& pairs) {
  BigUint total(0);
  for (const auto& p : pairs) {
    if (p.self_paired) {
      // identical half states: unordered tree pairs with repetition,
      // t(t+1)/2 (t(t+1) is always even)
      total += (p.count1 * (p.count1 + BigUint(1))).half();
    } else {
      total += p.count1 * p.count2;
    }
  }
  return total;
}

}  // namespace molinfer
