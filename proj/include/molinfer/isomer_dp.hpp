#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "molinfer/biguint.hpp"
#include "molinfer/frequency.hpp"
#include "molinfer/isomer.hpp"

namespace molinfer {

struct DpOptions {
  int sample_cap = 1;        // sample trees kept per vector; -1 = keep all
  long long entry_cap = -1;  // max vectors per set; -1 = unlimited
  double step_seconds = -1;  // wall-clock cap per step; -1 = unlimited
};

struct DpKey {
  int elem = -1, d = 0, m = 0, h = -1;
  friend auto operator<=>(const DpKey&, const DpKey&) = default;
};

using TreePtr = std::shared_ptr<const RootedTree>;

struct VecEntry {
  BigUint count;
  std::vector<TreePtr> samples;
};

struct VecSet {
  std::map<FrequencyVector, VecEntry> entries;
  bool truncated = false;
};

// One DP run: all vector sets for a single budget vector (one component of
// the decomposed graph) under one height range.
class DpRun {
 public:
  DpRun(const ChemSpec& chem, int rho, int dmax, FrequencyVector budget, Bounds ch,
        DpOptions opt)
      : chem_(chem),
        table_(chem.table),
        rho_(rho),
        dmax_(dmax),
        budget_(std::move(budget)),
        ch_(ch),
        opt_(opt) {}

  // family (i):   inl0[(a,d,m)]          f(T[+2]), nc, height <= rho
  // family (ii):  en0[(a,d,m)]           f(T[+1]), nc, height == rho
  // family (iii): en[h][(a,d,m)]         f(T[+1]), nc bi-rooted
  // family (iv):  co0[delta][(a,d,m,h)]  f(T[+delta]), c-tree
  std::map<DpKey, VecSet> inl0, en0;
  std::map<int, std::map<DpKey, VecSet>> en;
  std::map<int, std::map<DpKey, VecSet>> co0;
  bool truncated = false;

  void run_steps_1_to_3() {
    step1();
    step2();
    step3();
  }

  // ---- step 1: enumerate fringe-height trees -----------------------------
  void step1() {
    auto deadline = start_clock();
    std::vector<int> roots = chem_.lambda_co;
    for (int e : chem_.lambda_nc)
      if (std::find(roots.begin(), roots.end(), e) == roots.end()) roots.push_back(e);
    std::sort(roots.begin(), roots.end(), [&](int a, int b) { return table_.less(a, b); });
    for (int a : roots) {
      int dcap = std::min(table_.valence(a), dmax_) - 1;
      for (int d = 0; d <= dcap; ++d) {
        for (const RootedTree& t : enumerate_trees(a, d)) {
          if (expired(deadline)) { truncated = true; return; }
          int m = t.n() == 1 ? 0 : t.beta_sums()[0];
          int h = t.heights()[0];
          int va = table_.valence(a);
          // (i) nc internal-position tree
          if (d <= std::min(va, dmax_) - 2 && m >= d && m <= va - 2 && h <= rho_)
            classify(inl0[{a, d, m, -1}], t, true, 2, 0);
          // (ii) nc end tree, height exactly rho
          if (d >= 1 && d <= std::min(va, dmax_) - 1 && m >= d && m <= va - 1 && h == rho_)
            classify(en0[{a, d, m, -1}], t, true, 1, 0);
          // (iv) rooted c-trees for each usable fictitious degree
          for (int delta = 2; delta <= 4; ++delta) {
            if (d > std::min(va, dmax_) - delta) continue;
            if (m < d || m > va - delta) continue;
            if (h > rho_) continue;
            classify(co0[delta][{a, d, m, h}], t, false, delta, 0);
          }
        }
      }
    }
  }

  // ---- step 2: end-subtree chains -----------------------------------------
  void step2() {
    auto deadline = start_clock();
    for (int h = 1; h <= ch_.ub - rho_ - 1; ++h) {
      const auto& prev = h == 1 ? en0 : en[h - 1];
      for (const auto& [kp, setp] : prev) {
        for (const auto& [ki, seti] : inl0) {
          int a = ki.elem, d = ki.d + 1, mprime = ki.m;
          int va = table_.valence(a);
          if (d > std::min(va, dmax_) - 1) continue;
          for (int mm = 1; mm <= std::min(3, table_.valence(kp.elem) - kp.m); ++mm) {
            int m = mprime + mm;
            if (m < d || m > va - 1) continue;
            EdgeConfig gamma{{a, d + 1}, {kp.elem, kp.d + 1}, mm};
            combine(en[h][{a, d, m, -1}], seti, setp, key_in(gamma), false, mm, deadline);
            if (expired(deadline)) { truncated = true; return; }
          }
        }
      }
    }
  }

  // ---- step 3: rooted core-subtrees above fringe height -------------------
  void step3() {
    auto deadline = start_clock();
    if (budget_.tbc() < 1) return;
    for (int delta = 3; delta >= 2; --delta) {
      for (int h = rho_ + 1; h <= ch_.ub; ++h) {
        const auto& enh = h - rho_ - 1 == 0 ? en0 : en[h - rho_ - 1];
        auto up = co0.find(delta + 1);
        if (up == co0.end()) continue;
        for (const auto& [kp, setp] : up->second) {
          if (kp.h > rho_) continue;  // p in [0, rho]
          for (const auto& [ke, sete] : enh) {
            int a = kp.elem, d = kp.d + 1, mprime = kp.m;
            int va = table_.valence(a);
            if (d > std::min(va, dmax_) - delta) continue;
            for (int mm = 1; mm <= std::min(3, table_.valence(ke.elem) - ke.m); ++mm) {
              int m = mprime + mm;
              if (m < d || m > va - delta) continue;
              EdgeConfig gamma{{a, d + delta}, {ke.elem, ke.d + 1}, mm};
              combine(co0[delta][{a, d, m, h}], setp, sete, key_in(gamma), true, mm, deadline);
              if (expired(deadline)) { truncated = true; return; }
            }
          }
        }
      }
    }
  }

  // samples of co0[delta] entries whose vector is exactly the budget
  VecSet target_rooted(int delta, int d, int m, int elem, Bounds hrange) const {
    VecSet out;
    auto it = co0.find(delta);
    if (it == co0.end()) return out;
    for (const auto& [k, set] : it->second) {
      if (k.elem != elem || k.d != d || k.m != m) continue;
      if (k.h < hrange.lb || k.h > hrange.ub) continue;
      auto e = set.entries.find(budget_);
      if (e == set.entries.end()) continue;
      auto& dst = out.entries[budget_];
      dst.count += e->second.count;
      for (auto& s : e->second.samples) dst.samples.push_back(s);
      out.truncated = out.truncated || set.truncated;
    }
    return out;
  }

  const FrequencyVector& budget() const { return budget_; }
  const Bounds& ch() const { return ch_; }
  int rho() const { return rho_; }
  int dmax() const { return dmax_; }
  const ElementTable& table() const { return table_; }
  const DpOptions& options() const { return opt_; }

  // store a (vector, count, sample) into a set honoring the caps
  void store(VecSet& set, const FrequencyVector& w, const BigUint& count, const TreePtr& sample) {
    auto it = set.entries.find(w);
    if (it == set.entries.end()) {
      if (opt_.entry_cap >= 0 && (long long)set.entries.size() >= opt_.entry_cap) {
        set.truncated = true;
        truncated = true;
        return;
      }
      it = set.entries.emplace(w, VecEntry{}).first;
    }
    it->second.count += count;
    if (opt_.sample_cap < 0 || (long long)it->second.samples.size() < (long long)opt_.sample_cap)
      it->second.samples.push_back(sample);
    else
      set.truncated = true;
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_clock() const {
    return opt_.step_seconds < 0 ? Clock::time_point::max()
                                 : Clock::now() + std::chrono::milliseconds(
                                                      (long long)(opt_.step_seconds * 1000));
  }
  bool expired(Clock::time_point deadline) const {
    return opt_.step_seconds >= 0 && Clock::now() > deadline;
  }

  void classify(VecSet& set, const RootedTree& t, bool nc, int d1, int d2) {
    RootedTree copy = t;
    copy.nc = nc;
    copy.r2 = 0;
    FrequencyVector w;
    try {
      w = tree_frequency_vector(copy, rho_, table_, d1, d2);
    } catch (const std::invalid_argument&) {
      return;  // fictitious degree exceeds the valence
    }
    if (!w.leq(budget_)) return;
    store(set, w, BigUint(1), std::make_shared<RootedTree>(std::move(copy)));
  }

  // w = w' + w'' + 1_gamma (+ 1_tbc for c-trees), samples spliced as
  // root-tree plus chain-tree joined by an edge of multiplicity mm
  void combine(VecSet& dst, const VecSet& root_part, const VecSet& chain_part, SigKey gamma,
               bool add_tbc, int mm, Clock::time_point deadline) {
    if (budget_.at(gamma) < 1) return;
    for (const auto& [wr, er] : root_part.entries) {
      for (const auto& [wc, ec] : chain_part.entries) {
        if (expired(deadline)) { truncated = true; return; }
        FrequencyVector w = wr + wc;
        w.add(gamma, 1);
        if (add_tbc) w.add(key_tbc(), 1);
        if (!w.leq(budget_)) continue;
        BigUint cnt = er.count * ec.count;
        TreePtr sample;
        if (!er.samples.empty() && !ec.samples.empty())
          sample = splice(*er.samples.front(), *ec.samples.front(), mm, add_tbc);
        long long pairs = (long long)er.samples.size() * (long long)ec.samples.size();
        auto it_probe = dst.entries.find(w);
        bool want_more =
            opt_.sample_cap < 0 ||
            it_probe == dst.entries.end() ||
            (long long)it_probe->second.samples.size() < (long long)opt_.sample_cap;
        if (want_more && pairs > 1) {
          // splice every sample pair (caps applied inside store)
          bool first = true;
          for (const auto& sr : er.samples)
            for (const auto& sc : ec.samples) {
              if (first) { first = false; continue; }
              store(dst, w, BigUint(0), splice(*sr, *sc, mm, add_tbc));
            }
        }
        store(dst, w, cnt, sample);
      }
    }
  }

  TreePtr splice(const RootedTree& root_part, const RootedTree& chain_part, int mm,
                 bool as_ctree) const {
    RootedTree t = root_part;
    t.nc = !as_ctree;
    int offset = t.n();
    for (size_t j = 0; j < chain_part.nodes.size(); ++j) {
      RootedTree::Node nd = chain_part.nodes[j];
      if (j == 0) {
        nd.parent = 0;
        nd.beta = mm;
      } else {
        nd.parent += offset;
      }
      t.nodes.push_back(nd);
    }
    t.r2 = chain_part.r2 + offset;
    if (as_ctree) t.r2 = 0;  // rooted c-tree: the chain is pendant structure
    return std::make_shared<RootedTree>(std::move(t));
  }

  // all non-isomorphic rooted trees with the given root element and child
  // count, heights <= rho, vertex count <= 2d+2, child counts <= dmax-1
  const std::vector<RootedTree>& enumerate_trees(int elem, int d) {
    auto key = std::make_pair(elem, d);
    auto it = tree_cache_.find(key);
    if (it != tree_cache_.end()) return it->second;
    std::vector<RootedTree> out;
    int size_cap = 2 * d + 2;
    // subtree pool: trees of height <= rho-1 rooted at each element
    build_subtree_pool();
    // children enumerated as a non-decreasing sequence of (pool index,
    // multiplicity) pairs so each multiset appears exactly once
    RootedTree base;
    base.nodes.push_back({elem, -1, 0});
    std::function<void(RootedTree&, int, int, long long, int)> rec2 =
        [&](RootedTree& cur, int remaining, int bsum, long long min_pair, int used) {
          if (remaining == 0) {
            out.push_back(cur);
            return;
          }
          for (size_t c = 0; c < pool_.size(); ++c) {
            const auto& [enc, sub, submax] = pool_[c];
            (void)enc;
            if (used + sub.n() + (remaining - 1) > size_cap) continue;
            for (int mult = 1; mult <= 3; ++mult) {
              long long pair = (long long)c * 4 + mult;
              if (pair < min_pair) continue;
              if (bsum + mult > table_.valence(elem)) continue;
              if (submax + mult > table_.valence(sub.nodes[0].elem)) continue;
              RootedTree next = cur;
              int off = next.n();
              for (size_t j = 0; j < sub.nodes.size(); ++j) {
                RootedTree::Node nd = sub.nodes[j];
                if (j == 0) {
                  nd.parent = 0;
                  nd.beta = mult;
                } else {
                  nd.parent += off;
                }
                next.nodes.push_back(nd);
              }
              rec2(next, remaining - 1, bsum + mult, pair, used + sub.n());
            }
          }
        };
    rec2(base, d, 0, 0, 1);
    it = tree_cache_.emplace(key, std::move(out)).first;
    return it->second;
  }

  // pool of subtrees (height <= rho-1) that can hang below a root child
  void build_subtree_pool() {
    if (pool_built_) return;
    pool_built_ = true;
    // level 0: single vertices
    std::vector<std::vector<std::tuple<std::string, RootedTree, int>>> levels(static_cast<size_t>(rho_));
    std::vector<int> elems = chem_.lambda_nc;
    std::sort(elems.begin(), elems.end(), [&](int a, int b) { return table_.less(a, b); });
    for (int h = 0; h < rho_; ++h) {
      for (int elem : elems) {
        if (h == 0) {
          RootedTree t;
          t.nodes.push_back({elem, -1, 0});
          levels[size_t(h)].push_back({encode(t), t, 0});
          continue;
        }
        // root with 1..dmax-1 children from lower levels, at least one at h-1
        const auto& lower = levels[size_t(h - 1)];
        std::vector<std::tuple<std::string, RootedTree, int>> all_lower;
        for (int hh = 0; hh < h; ++hh)
          for (auto& x : levels[size_t(hh)]) all_lower.push_back(x);
        std::function<void(RootedTree&, int, int, long long, bool, int)> rec =
            [&](RootedTree& cur, int kids, int bsum, long long min_pair, bool has_deep,
                int used) {
              if (kids > 0 && has_deep) {
                RootedTree t = cur;
                levels[size_t(h)].push_back({encode(t), t, bsum});
              }
              if (kids >= dmax_ - 1) return;
              for (size_t c = 0; c < all_lower.size(); ++c) {
                const auto& [enc, sub, submax] = all_lower[c];
                (void)enc;
                if (used + sub.n() > 2 * (dmax_ - 1) + 2) continue;
                bool deep = sub.heights()[0] == h - 1;
                for (int mult = 1; mult <= 3; ++mult) {
                  long long pair = (long long)c * 4 + mult;
                  if (pair < min_pair) continue;
                  if (bsum + mult + 1 > table_.valence(elem)) continue;  // +1 parent edge
                  if (submax + mult > table_.valence(sub.nodes[0].elem)) continue;
                  RootedTree next = cur;
                  int off = next.n();
                  for (size_t j = 0; j < sub.nodes.size(); ++j) {
                    RootedTree::Node nd = sub.nodes[j];
                    if (j == 0) {
                      nd.parent = 0;
                      nd.beta = mult;
                    } else {
                      nd.parent += off;
                    }
                    next.nodes.push_back(nd);
                  }
                  rec(next, kids + 1, bsum + mult, pair, has_deep || deep, used + sub.n());
                }
              }
            };
        RootedTree base;
        base.nodes.push_back({elem, -1, 0});
        rec(base, 0, 0, 0, false, 1);
        (void)lower;
      }
    }
    for (int h = 0; h < rho_; ++h)
      for (auto& x : levels[size_t(h)]) pool_.push_back(x);
    std::sort(pool_.begin(), pool_.end(),
              [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  }

  std::string encode(const RootedTree& t) const {
    std::function<std::string(int)> rec = [&](int v) -> std::string {
      std::vector<std::string> ch;
      for (int w = v + 1; w < t.n(); ++w)
        if (t.nodes[size_t(w)].parent == v)
          ch.push_back(std::to_string(t.nodes[size_t(w)].beta) + rec(w));
      std::sort(ch.begin(), ch.end());
      std::string s = "(" + std::to_string(t.nodes[size_t(v)].elem);
      for (auto& x : ch) s += x;
      return s + ")";
    };
    return rec(0);
  }

  const ChemSpec& chem_;
  const ElementTable& table_;
  int rho_, dmax_;
  FrequencyVector budget_;
  Bounds ch_;
  DpOptions opt_;
  std::map<std::pair<int, int>, std::vector<RootedTree>> tree_cache_;
  std::vector<std::tuple<std::string, RootedTree, int>> pool_;  // (code, tree, root bond sum)
  bool pool_built_ = false;
};

}  // namespace molinfer
