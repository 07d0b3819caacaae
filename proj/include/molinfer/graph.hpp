#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "molinfer/chem.hpp"

namespace molinfer {

// Mixed chemical graph: undirected core edges, directed non-core edges with
// tail = parent (closer to the core).  Vertices are 0-based indices into
// alpha.  Simple graph, no hydrogens.
struct ChemicalGraph {
  struct Edge {
    int u = -1, v = -1;
    int beta = 1;
  };

  std::vector<int> alpha;        // element id per vertex
  std::vector<Edge> core_edges;  // undirected
  std::vector<Edge> noncore_edges;  // directed (u -> v), head farther from core
  int rho = 2;                   // branch-parameter the file was written with

  int n() const { return int(alpha.size()); }
  int m() const { return int(core_edges.size() + noncore_edges.size()); }

  int add_vertex(int elem) {
    alpha.push_back(elem);
    return n() - 1;
  }
  void add_core_edge(int u, int v, int beta) { core_edges.push_back({u, v, beta}); }
  void add_noncore_edge(int tail, int head, int beta) { noncore_edges.push_back({tail, head, beta}); }

  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    // (neighbor, beta) per vertex, over all edges
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n()));
    for (const Edge& e : core_edges) {
      adj[size_t(e.u)].push_back({e.v, e.beta});
      adj[size_t(e.v)].push_back({e.u, e.beta});
    }
    for (const Edge& e : noncore_edges) {
      adj[size_t(e.u)].push_back({e.v, e.beta});
      adj[size_t(e.v)].push_back({e.u, e.beta});
    }
    return adj;
  }

  std::vector<int> degrees() const {
    std::vector<int> d(size_t(n()), 0);
    for (const Edge& e : core_edges) { d[size_t(e.u)]++; d[size_t(e.v)]++; }
    for (const Edge& e : noncore_edges) { d[size_t(e.u)]++; d[size_t(e.v)]++; }
    return d;
  }

  std::vector<int> beta_sums() const {
    std::vector<int> b(size_t(n()), 0);
    for (const Edge& e : core_edges) { b[size_t(e.u)] += e.beta; b[size_t(e.v)] += e.beta; }
    for (const Edge& e : noncore_edges) { b[size_t(e.u)] += e.beta; b[size_t(e.v)] += e.beta; }
    return b;
  }

  bool connected() const {
    if (n() == 0) return false;
    auto adj = adjacency();
    std::vector<char> seen(size_t(n()), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, b] : adj[size_t(v)])
        if (!seen[size_t(w)]) { seen[size_t(w)] = 1; ++cnt; stack.push_back(w); }
    }
    return cnt == n();
  }

  // Connectivity, simplicity and the valence condition sum beta(uv) <= val(u).
  void validate(const ElementTable& t) const {
    for (const Edge& e : core_edges)
      if (e.u == e.v) throw std::invalid_argument("self-loop in graph");
    for (const Edge& e : noncore_edges)
      if (e.u == e.v) throw std::invalid_argument("self-loop in graph");
    std::map<std::pair<int, int>, int> seen;
    auto touch = [&](int u, int v) {
      std::pair<int, int> key = u < v ? std::pair<int, int>{u, v} : std::pair<int, int>{v, u};
      if (++seen[{key.first, key.second}] > 1) throw std::invalid_argument("parallel edges in graph");
    };
    for (const Edge& e : core_edges) touch(e.u, e.v);
    for (const Edge& e : noncore_edges) touch(e.u, e.v);
    if (!connected()) throw std::invalid_argument("graph not connected");
    auto bs = beta_sums();
    for (int v = 0; v < n(); ++v)
      if (bs[size_t(v)] > t.valence(alpha[size_t(v)]))
        throw std::invalid_argument("valence exceeded at vertex " + std::to_string(v + 1));
  }
};

// Line-oriented text format:
//   graph <n> <m> <rho>
//   v <id> <element>
//   ce <u> <v> <beta>
//   nce <tail> <head> <beta>
// Vertex ids are arbitrary positive integers; body lines may come in any
// order after the header.
inline ChemicalGraph read_graph_text(std::istream& in, ElementTable& table) {
  std::string line;
  ChemicalGraph g;
  int n = -1, m = -1;
  std::map<int, int> idmap;
  struct RawEdge { int u, v, b; bool core; };
  std::vector<RawEdge> edges;
  std::vector<std::pair<int, std::string>> verts;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "graph") {
      if (!(ls >> n >> m >> g.rho)) throw std::invalid_argument("bad graph header");
    } else if (tag == "v") {
      int id; std::string el;
      if (!(ls >> id >> el)) throw std::invalid_argument("bad vertex line: " + line);
      verts.push_back({id, el});
    } else if (tag == "ce" || tag == "nce") {
      RawEdge e{};
      if (!(ls >> e.u >> e.v >> e.b)) throw std::invalid_argument("bad edge line: " + line);
      e.core = tag == "ce";
      edges.push_back(e);
    } else {
      throw std::invalid_argument("unknown line tag: " + tag);
    }
  }
  if (n < 0) throw std::invalid_argument("missing graph header");
  if (int(verts.size()) != n) throw std::invalid_argument("vertex count mismatch");
  if (int(edges.size()) != m) throw std::invalid_argument("edge count mismatch");
  std::sort(verts.begin(), verts.end());
  for (auto& [id, el] : verts) {
    if (idmap.count(id)) throw std::invalid_argument("duplicate vertex id " + std::to_string(id));
    int eid = table.find(el) ? *table.find(el) : -1;
    if (eid < 0) throw std::invalid_argument("unknown element in graph: " + el);
    idmap[id] = g.add_vertex(eid);
  }
  for (const auto& e : edges) {
    if (!idmap.count(e.u) || !idmap.count(e.v))
      throw std::invalid_argument("edge references unknown vertex");
    if (e.core)
      g.add_core_edge(idmap[e.u], idmap[e.v], e.b);
    else
      g.add_noncore_edge(idmap[e.u], idmap[e.v], e.b);
  }
  return g;
}

inline ChemicalGraph read_graph_file(const std::string& path, ElementTable& table) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph_text(in, table);
}

inline void write_graph_text(std::ostream& out, const ChemicalGraph& g, const ElementTable& t) {
  out << "graph " << g.n() << " " << g.m() << " " << g.rho << "\n";
  for (int v = 0; v < g.n(); ++v)
    out << "v " << (v + 1) << " " << t.symbol(g.alpha[size_t(v)]) << "\n";
  for (const auto& e : g.core_edges)
    out << "ce " << (e.u + 1) << " " << (e.v + 1) << " " << e.beta << "\n";
  for (const auto& e : g.noncore_edges)
    out << "nce " << (e.u + 1) << " " << (e.v + 1) << " " << e.beta << "\n";
}

inline std::string graph_to_string(const ChemicalGraph& g, const ElementTable& t) {
  std::ostringstream os;
  write_graph_text(os, g, t);
  return os.str();
}

}  // namespace molinfer
