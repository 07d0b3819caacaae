#pragma once

#include <random>
#include <vector>

#include "molinfer/graph.hpp"
#include "molinfer/structure.hpp"

namespace testutil {

using molinfer::ChemicalGraph;
using molinfer::ElementTable;

inline ChemicalGraph cycle_graph(int len, int elem, int beta = 1) {
  ChemicalGraph g;
  for (int i = 0; i < len; ++i) g.add_vertex(elem);
  for (int i = 0; i < len; ++i) g.add_core_edge(i, (i + 1) % len, beta);
  return g;
}

// The rank-2 core assembled from the five paths of the worked example:
// two 7-cycles joined by a 3-edge path; 17 vertices, 18 edges.
inline ChemicalGraph h1_core(int elem) {
  ChemicalGraph g;
  for (int i = 0; i < 17; ++i) g.add_vertex(elem);
  auto path = [&](std::vector<int> vs) {
    for (size_t i = 0; i + 1 < vs.size(); ++i) g.add_core_edge(vs[i], vs[i + 1], 1);
  };
  path({0, 1, 2, 3, 4});       // P1 = v1..v5
  path({0, 6, 5, 4});          // P2 = v1,v7,v6,v5
  path({0, 7, 8, 9, 10});      // P3 = v1,v8,v9,v10,v11
  path({10, 11, 12, 13, 14});  // P4 = v11..v15
  path({14, 15, 16, 10});      // P5 = v15,v16,v17,v11
  return g;
}

// h1 core plus two pendant chains of length 3 (at v13 and v9), which makes
// the graph 2-lean with two leaf 2-branches.
inline ChemicalGraph h1_decorated(int elem) {
  ChemicalGraph g = h1_core(elem);
  int a = g.add_vertex(elem), b = g.add_vertex(elem), c = g.add_vertex(elem);
  g.add_noncore_edge(12, a, 1);
  g.add_noncore_edge(a, b, 1);
  g.add_noncore_edge(b, c, 1);
  int d = g.add_vertex(elem), e = g.add_vertex(elem), f = g.add_vertex(elem);
  g.add_noncore_edge(8, d, 1);
  g.add_noncore_edge(d, e, 1);
  g.add_noncore_edge(e, f, 1);
  return g;
}

// Random connected cyclic chemical graph: a cycle plus randomly attached
// pendant vertices, random elements and multiplicities, valence-feasible by
// construction.  Non-core edges are attached parent->child.
inline ChemicalGraph random_cyclic(std::mt19937& rng, const ElementTable& t, int nmax,
                                   std::vector<int> elems, int max_beta = 3) {
  int n = std::uniform_int_distribution<int>(3, nmax)(rng);
  int cyc = std::uniform_int_distribution<int>(3, n)(rng);
  ChemicalGraph g;
  auto pick_elem = [&]() {
    return elems[std::uniform_int_distribution<size_t>(0, elems.size() - 1)(rng)];
  };
  for (int i = 0; i < cyc; ++i) g.add_vertex(pick_elem());
  std::vector<int> bsum(size_t(cyc), 0), deg(size_t(cyc), 0);
  for (int i = 0; i < cyc; ++i) {
    int j = (i + 1) % cyc;
    int cap = std::min(t.valence(g.alpha[size_t(i)]) - bsum[size_t(i)] - (i == 0 ? 1 : 0),
                       t.valence(g.alpha[size_t(j)]) - bsum[size_t(j)] - 1);
    cap = std::min({cap, max_beta, 3});
    if (i == cyc - 1) cap = std::min(cap, t.valence(g.alpha[0]) - bsum[0]);
    int b = cap <= 1 ? 1 : std::uniform_int_distribution<int>(1, cap)(rng);
    if (b < 1) b = 1;
    g.add_core_edge(i, j, b);
    bsum[size_t(i)] += b;
    bsum[size_t(j)] += b;
    deg[size_t(i)]++;
    deg[size_t(j)]++;
  }
  // sanity: if the ring closed over valence, fall back to all-single bonds
  for (int i = 0; i < cyc; ++i)
    if (bsum[size_t(i)] > t.valence(g.alpha[size_t(i)])) {
      g.core_edges.clear();
      for (auto& x : bsum) x = 0;
      for (auto& x : deg) x = 2;
      for (int k = 0; k < cyc; ++k) {
        g.add_core_edge(k, (k + 1) % cyc, 1);
        bsum[size_t(k)] += 2;
      }
      break;
    }
  int attempts = 0;
  while (g.n() < n && attempts++ < 200) {
    int parent = std::uniform_int_distribution<int>(0, g.n() - 1)(rng);
    int cap = t.valence(g.alpha[size_t(parent)]) - bsum[size_t(parent)];
    if (cap < 1 || deg[size_t(parent)] >= 4) continue;
    int elem = pick_elem();
    int bcap = std::min({cap, t.valence(elem), max_beta, 3});
    int b = bcap <= 1 ? 1 : std::uniform_int_distribution<int>(1, bcap)(rng);
    int child = g.add_vertex(elem);
    g.add_noncore_edge(parent, child, b);
    bsum.push_back(b);
    deg.push_back(1);
    bsum[size_t(parent)] += b;
    deg[size_t(parent)]++;
  }
  return g;
}

}  // namespace testutil
