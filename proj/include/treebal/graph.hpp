// Multigraph / multidigraph value types and their text file formats.
//
// Undirected graph file:        Directed graph file:
//   # comment                     # comment
//   p <n> <m>                     p <n> <m>
//   e <u> <v>                     a <tail> <head>
//
// Vertices are 1-indexed. Parallel edges are allowed, self-loops are not.
// Edge ids are 1-based positions in the file; ids of later additions keep
// strictly increasing, so the edge list is always sorted by id.
#pragma once

#include <cassert>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "treebal/common.hpp"

namespace treebal {

struct Edge {
  int id;
  int u, v;

  int other(int w) const {
    assert(w == u || w == v);
    return w == u ? v : u;
  }
};

class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(int n) : n_(n) { assert(n >= 0); }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int idx) const { return edges_[idx]; }

  int add_vertex() { return ++n_; }

  // Returns the id of the new edge.
  int add_edge(int u, int v) {
    check_endpoints(u, v);
    int id = next_id_++;
    edges_.push_back({id, u, v});
    return id;
  }

  // Used when rebuilding a graph whose edges must keep their original ids.
  // Edges must still be added in increasing id order.
  void add_edge_with_id(int id, int u, int v) {
    check_endpoints(u, v);
    assert(edges_.empty() || edges_.back().id < id);
    edges_.push_back({id, u, v});
    if (id >= next_id_) next_id_ = id + 1;
  }

  // Position of the edge with the given id, or nullopt. Binary search works
  // because the list is id-sorted.
  std::optional<int> index_of(int edge_id) const {
    int lo = 0, hi = edge_count() - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      if (edges_[mid].id == edge_id) return mid;
      if (edges_[mid].id < edge_id)
        lo = mid + 1;
      else
        hi = mid - 1;
    }
    return std::nullopt;
  }

  // vertex -> indices into edges() of incident edges (parallel edges appear once
  // per copy; an edge appears once per distinct endpoint).
  std::vector<std::vector<int>> incidence() const {
    std::vector<std::vector<int>> inc(n_ + 1);
    for (int i = 0; i < edge_count(); ++i) {
      inc[edges_[i].u].push_back(i);
      inc[edges_[i].v].push_back(i);
    }
    return inc;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(n_ + 1, 0);
    for (const Edge& e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

 private:
  void check_endpoints(int u, int v) const {
    assert(1 <= u && u <= n_);
    assert(1 <= v && v <= n_);
    assert(u != v);
    (void)u;
    (void)v;
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  int next_id_ = 1;
};

struct Arc {
  int id;
  int tail, head;
};

class MultiDigraph {
 public:
  MultiDigraph() = default;
  explicit MultiDigraph(int n) : n_(n) { assert(n >= 0); }

  int vertex_count() const { return n_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int idx) const { return arcs_[idx]; }

  int add_arc(int tail, int head) {
    assert(1 <= tail && tail <= n_);
    assert(1 <= head && head <= n_);
    assert(tail != head);
    int id = next_id_++;
    arcs_.push_back({id, tail, head});
    return id;
  }

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  int next_id_ = 1;
};

namespace detail {

inline bool significant_line(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return false;
    if (!isspace(static_cast<unsigned char>(ch))) return true;
  }
  return false;
}

}  // namespace detail

// Parses the `p <n> <m>` header plus m `e`/`a` lines. Shared worker for both
// graph kinds; `tag` is 'e' or 'a'.
template <typename AddFn>
inline int parse_edge_list(std::istream& in, char tag, int& n_out, AddFn add) {
  std::string line;
  int lineno = 0;
  int n = -1, m = -1, seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::significant_line(line)) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "p") {
      if (n >= 0) throw ParseError(lineno, "duplicate problem line");
      if (!(ls >> n >> m) || n < 1 || m < 0)
        throw ParseError(lineno, "expected 'p <n> <m>' with n >= 1, m >= 0");
    } else if (kind.size() == 1 && kind[0] == tag) {
      if (n < 0) throw ParseError(lineno, "edge before problem line");
      int u, v;
      if (!(ls >> u >> v)) throw ParseError(lineno, "expected two vertex indices");
      if (u < 1 || u > n || v < 1 || v > n)
        throw ParseError(lineno, "vertex index out of range 1.." + std::to_string(n));
      if (u == v) throw ParseError(lineno, "self-loops are not allowed");
      ++seen;
      if (seen > m) throw ParseError(lineno, "more edges than declared");
      add(u, v);
    } else {
      throw ParseError(lineno, "unrecognised line kind '" + kind + "'");
    }
  }
  if (n < 0) throw ParseError(lineno, "missing problem line");
  if (seen != m)
    throw ParseError(lineno, "declared " + std::to_string(m) + " edges, found " +
                                 std::to_string(seen));
  n_out = n;
  return lineno;
}

inline MultiGraph parse_graph(std::istream& in) {
  std::vector<std::pair<int, int>> pending;
  int n = 0;
  parse_edge_list(in, 'e', n, [&](int u, int v) { pending.emplace_back(u, v); });
  MultiGraph g(n);
  for (auto [u, v] : pending) g.add_edge(u, v);
  return g;
}

inline MultiDigraph parse_digraph(std::istream& in) {
  std::vector<std::pair<int, int>> pending;
  int n = 0;
  parse_edge_list(in, 'a', n, [&](int u, int v) { pending.emplace_back(u, v); });
  MultiDigraph d(n);
  for (auto [t, h] : pending) d.add_arc(t, h);
  return d;
}

inline void serialize_graph(const MultiGraph& g, std::ostream& out) {
  out << "p " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.u << ' ' << e.v << '\n';
}

inline void serialize_digraph(const MultiDigraph& d, std::ostream& out) {
  out << "p " << d.vertex_count() << ' ' << d.arc_count() << '\n';
  for (const Arc& a : d.arcs()) out << "a " << a.tail << ' ' << a.head << '\n';
}

inline MultiGraph parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline MultiDigraph parse_digraph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_digraph(in);
}

}  // namespace treebal
