#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "molinfer/check.hpp"
#include "molinfer/descriptors.hpp"
#include "molinfer/graph.hpp"
#include "molinfer/milp_build.hpp"

namespace molinfer {

enum class SolveStatus { Optimal, Feasible, Infeasible, Timeout, Unknown };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Timeout: return "timeout";
    default: return "unknown";
  }
}

// Solver output: variable values keyed by name; unlisted variables read 0.
struct Assignment {
  SolveStatus status = SolveStatus::Unknown;
  std::map<std::string, double> values;
  std::string raw_excerpt;

  double value(const std::string& name) const {
    auto it = values.find(name);
    return it == values.end() ? 0.0 : it->second;
  }
  bool solution_available() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace decodedetail {

inline long long round_int(double v, const std::string& name) {
  double r = std::nearbyint(v);
  if (std::fabs(v - r) > 1e-4)
    throw DecodeError("variable " + name + " = " + std::to_string(v) +
                      " is too far from an integer");
  return static_cast<long long>(r);
}

}  // namespace decodedetail

// Rebuilds the chemical graph selected by a feasible assignment.  Graph
// vertices are created for the seed block, then used T-vertices, F-vertices
// and fringe vertices.
inline ChemicalGraph decode_solution(const BuiltModel& bm, const TargetSpec& spec,
                                     const Assignment& a) {
  using decodedetail::round_int;
  if (!a.solution_available())
    throw DecodeError(std::string("no solution to decode (status ") + status_name(a.status) + ")");
  const MilpModel& M = bm.model;
  auto get = [&](const std::string& name) -> long long {
    if (!M.has(name)) return 0;
    return round_int(a.value(name), name);
  };
  const SchemeParams& P = bm.P;
  ChemicalGraph g;
  g.rho = spec.rho();

  auto elem_co = [&](long long code, const std::string& what) {
    if (code < 1 || code > (long long)bm.lam_co.size())
      throw DecodeError("missing element assignment on " + what);
    return bm.lam_co[size_t(code - 1)];
  };
  auto elem_nc = [&](long long code, const std::string& what) {
    if (code < 1 || code > (long long)bm.lam_nc.size())
      throw DecodeError("missing element assignment on " + what);
    return bm.lam_nc[size_t(code - 1)];
  };

  // seed vertices
  std::vector<int> seed_vertex(size_t(P.tC));
  for (int i = 1; i <= P.tC; ++i)
    seed_vertex[size_t(i - 1)] =
        g.add_vertex(elem_co(get("aC_" + std::to_string(i) + "_0"), "seed vertex"));

  // T-runs per color
  std::vector<int> t_vertex(size_t(P.tT + 1), -1);
  std::map<int, std::vector<int>> runs;  // color -> T indices ascending
  for (int i = 1; i <= P.tT; ++i) {
    if (get(milpdetail::Builder::nm("vT", i, 0)) != 1) continue;
    long long k = get(milpdetail::Builder::nm("chiT", i));
    if (k < 1 || k > P.kC) throw DecodeError("used T-vertex without a path color");
    t_vertex[size_t(i)] = g.add_vertex(elem_co(get("aT_" + std::to_string(i) + "_0"), "T-vertex"));
    runs[int(k)].push_back(i);
  }
  for (auto& [k, idxs] : runs) {
    for (size_t q = 1; q < idxs.size(); ++q)
      if (idxs[q] != idxs[q - 1] + 1) throw DecodeError("path color run not contiguous");
    if (get(milpdetail::Builder::nm("dclrT", k)) != 1)
      throw DecodeError("colored run without dclrT flag");
    int e = P.edge_order[size_t(k - 1)];
    int tail = spec.seed.edges[size_t(e)].u, head = spec.seed.edges[size_t(e)].v;
    long long bp = get(milpdetail::Builder::nm("betaP", k));
    long long bmn = get(milpdetail::Builder::nm("betaM", k));
    if (bp < 1 || bmn < 1) throw DecodeError("realized path with zero terminal multiplicity");
    g.add_core_edge(seed_vertex[size_t(tail)], t_vertex[size_t(idxs.front())], int(bp));
    for (size_t q = 1; q < idxs.size(); ++q) {
      long long b = get(milpdetail::Builder::nm("bT", idxs[q]));
      if (b < 1) throw DecodeError("used T-edge with zero multiplicity");
      g.add_core_edge(t_vertex[size_t(idxs[q - 1])], t_vertex[size_t(idxs[q])], int(b));
    }
    g.add_core_edge(t_vertex[size_t(idxs.back())], seed_vertex[size_t(head)], int(bmn));
  }
  // direct seed edges
  for (int e = 0; e < P.mC; ++e) {
    if (spec.seed.edges[size_t(e)].kind == EdgeKind::Ge2) continue;
    if (get(milpdetail::Builder::nm("eC", e + 1)) != 1) continue;
    long long b = get(milpdetail::Builder::nm("bC", e + 1));
    if (b < 1) throw DecodeError("used seed edge with zero multiplicity");
    g.add_core_edge(seed_vertex[size_t(spec.seed.edges[size_t(e)].u)],
                    seed_vertex[size_t(spec.seed.edges[size_t(e)].v)], int(b));
  }

  // F-runs per color (internal paths)
  std::vector<int> f_vertex(size_t(P.tF + 1), -1);
  std::map<int, std::vector<int>> fruns;
  for (int i = 1; i <= P.tF; ++i) {
    if (get(milpdetail::Builder::nm("vF", i, 0)) != 1) continue;
    long long c = get(milpdetail::Builder::nm("chiF", i));
    if (c < 1 || c > P.cF) throw DecodeError("used F-vertex without a color");
    f_vertex[size_t(i)] = g.add_vertex(elem_nc(get("aF_" + std::to_string(i) + "_0"), "F-vertex"));
    fruns[int(c)].push_back(i);
  }
  for (auto& [c, idxs] : fruns) {
    for (size_t q = 1; q < idxs.size(); ++q)
      if (idxs[q] != idxs[q - 1] + 1) throw DecodeError("internal color run not contiguous");
    int root = c <= P.tC_tilde ? seed_vertex[size_t(c - 1)] : t_vertex[size_t(c - P.tC_tilde)];
    if (root < 0) throw DecodeError("internal path rooted at an unused vertex");
    long long b0 = get(milpdetail::Builder::nm("betaIn", c));
    if (b0 < 1) throw DecodeError("internal path with zero entry multiplicity");
    g.add_noncore_edge(root, f_vertex[size_t(idxs.front())], int(b0));
    for (size_t q = 1; q < idxs.size(); ++q) {
      long long b = get(milpdetail::Builder::nm("bF", idxs[q]));
      if (b < 1) throw DecodeError("used F-edge with zero multiplicity");
      g.add_noncore_edge(f_vertex[size_t(idxs[q - 1])], f_vertex[size_t(idxs[q])], int(b));
    }
  }

  // fringe trees
  for (int X = 0; X < 3; ++X) {
    const char* XN = X == 0 ? "C" : X == 1 ? "T" : "F";
    int count = X == 0 ? P.tC : X == 1 ? P.tT : P.tF;
    for (int i = 1; i <= count; ++i) {
      const Tabc& tr = X == 0 ? bm.treeC[size_t(i - 1)] : X == 1 ? bm.treeT : bm.treeF;
      int root = X == 0 ? seed_vertex[size_t(i - 1)]
                        : X == 1 ? t_vertex[size_t(i)] : f_vertex[size_t(i)];
      std::vector<int> node_vertex(size_t(tr.n()), -1);
      node_vertex[0] = root;
      for (int j = 1; j < tr.n(); ++j) {
        if (get(milpdetail::Builder::nm(std::string("v") + XN, i, j)) != 1) continue;
        if (root < 0) throw DecodeError("fringe vertex attached to an unused root");
        int parent = node_vertex[size_t(tr.parent[size_t(j)])];
        if (parent < 0) throw DecodeError("fringe vertex with unused parent");
        long long b = get(milpdetail::Builder::nm(std::string("b") + XN + "t", i, j));
        if (b < 1) throw DecodeError("used fringe edge with zero multiplicity");
        int elem = elem_nc(get(milpdetail::Builder::nm(std::string("a") + XN, i, j)),
                           "fringe vertex");
        node_vertex[size_t(j)] = g.add_vertex(elem);
        g.add_noncore_edge(parent, node_vertex[size_t(j)], int(b));
      }
    }
  }
  if (g.n() != int(get("n_G"))) throw DecodeError("decoded vertex count disagrees with n_G");
  return g;
}

// Feature vector as the model's descriptor variables report it.
inline FeatureVector model_feature_vector(const BuiltModel& bm, const Assignment& a) {
  using decodedetail::round_int;
  auto get = [&](const std::string& name) {
    return round_int(a.value(name), name);
  };
  FeatureVector f;
  f.n = int(get("n_G"));
  f.cs = int(get("cs"));
  f.ch = int(get("ch_G"));
  f.bl = int(get("bl_G"));
  f.ms_bar = Rational(get("Mass"), f.n);
  f.ns_h = int(get("n_H"));
  for (int d = 1; d <= 4; ++d) {
    f.dg_co[size_t(d - 1)] = int(get(milpdetail::Builder::nm("dgco", d)));
    f.dg_nc[size_t(d - 1)] = int(get(milpdetail::Builder::nm("dgnc", d)));
  }
  for (int m = 2; m <= 3; ++m) {
    f.bd_co[size_t(m - 2)] = int(get(milpdetail::Builder::nm("bdcoS", m)));
    f.bd_in[size_t(m - 2)] = int(get(milpdetail::Builder::nm("bdinS", m)));
    f.bd_ex[size_t(m - 2)] = int(get(milpdetail::Builder::nm("bdexS", m)));
  }
  for (size_t s = 0; s < bm.ldg_co.size(); ++s) {
    long long v = get(milpdetail::Builder::nm("nsco", int(s) + 1));
    if (v) f.ns_co[bm.ldg_co[s]] = int(v);
  }
  for (size_t s = 0; s < bm.ldg_nc.size(); ++s) {
    long long v = get(milpdetail::Builder::nm("nsnc", int(s) + 1));
    if (v) f.ns_nc[bm.ldg_nc[s]] = int(v);
  }
  for (size_t i = 0; i < bm.gco.size(); ++i) {
    long long v = get(milpdetail::Builder::nm("ecco", int(i) + 1));
    if (v) f.ec_co[bm.gco[i]] = int(v);
  }
  for (size_t i = 0; i < bm.gin.size(); ++i) {
    long long v = get(milpdetail::Builder::nm("ecin", int(i) + 1));
    if (v) f.ec_in[bm.gin[i]] = int(v);
  }
  for (size_t i = 0; i < bm.gex.size(); ++i) {
    long long v = get(milpdetail::Builder::nm("ecex", int(i) + 1));
    if (v) f.ec_ex[bm.gex[i]] = int(v);
  }
  return f;
}

// Decode plus the Stage-4 exit checks: the graph must satisfy the target
// specification and reproduce the model's descriptor values exactly.
struct DecodedSolution {
  ChemicalGraph graph;
  FeatureVector features;
  ExtensionReport report;
};

inline DecodedSolution decode_and_verify(const BuiltModel& bm, const TargetSpec& spec,
                                         const Assignment& a) {
  DecodedSolution d;
  d.graph = decode_solution(bm, spec, a);
  d.graph.validate(spec.chem.table);
  FeatureVector from_model = model_feature_vector(bm, a);
  d.features = feature_vector(d.graph, spec.rho(), spec.chem.alphabet(), spec.chem.table);
  if (!(d.features == from_model))
    throw DecodeError("decoded graph's feature vector disagrees with the model descriptors:\n  " +
                      d.features.str(spec.chem.table) + "\n  " +
                      from_model.str(spec.chem.table));
  d.report = check_extension(d.graph, spec);
  if (!d.report.pass)
    throw DecodeError("decoded graph fails the target specification:\n" + d.report.summary());
  return d;
}

}  // namespace molinfer
