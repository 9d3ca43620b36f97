// Decompositions of a graph into two colour classes, validity and balance checks.
//
// Decomposition file format: one line `c <edge_id> <1|2>` per edge, in edge id
// order. Partition witness file: `part <v1> <v2> ...` lines, one per class.
#pragma once

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "treebal/graph.hpp"
#include "treebal/union_find.hpp"

namespace treebal {

// colour[i] in {1,2} refers positionally to graph.edges()[i].
struct Decomposition {
  std::vector<int> colour;
};

// Same, plus the designation of a tree part A and leftover part M: the two
// colour classes restricted to A must be spanning trees, M edges only count
// towards colour degrees.
struct SplitDecomposition {
  std::vector<int> colour;
  std::vector<char> in_m;  // aligned with colour; 0 = tree part, 1 = leftover

  int m_count() const {
    int k = 0;
    for (char b : in_m) k += b;
    return k;
  }
};

struct ValidationReport {
  bool ok = true;
  std::string detail;

  static ValidationReport fail(std::string why) { return {false, std::move(why)}; }
  static ValidationReport pass() { return {}; }
};

namespace detail {

// Checks that the given edge positions form a spanning tree of g.
inline ValidationReport check_spanning_tree(const MultiGraph& g,
                                            const std::vector<int>& positions,
                                            const std::string& label) {
  int n = g.vertex_count();
  if (static_cast<int>(positions.size()) != n - 1)
    return ValidationReport::fail(label + ": has " + std::to_string(positions.size()) +
                                  " edges, a spanning tree needs " + std::to_string(n - 1));
  UnionFind uf(n + 1);
  for (int idx : positions) {
    const Edge& e = g.edge(idx);
    if (!uf.unite(e.u, e.v))
      return ValidationReport::fail(label + ": edge " + std::to_string(e.id) +
                                    " closes a cycle");
  }
  // n - 1 successful unions on n vertices imply connectivity.
  return ValidationReport::pass();
}

}  // namespace detail

inline ValidationReport validate_colours(const MultiGraph& g, const std::vector<int>& colour) {
  if (static_cast<int>(colour.size()) != g.edge_count())
    return ValidationReport::fail("colour vector size " + std::to_string(colour.size()) +
                                  " does not match edge count " +
                                  std::to_string(g.edge_count()));
  for (int i = 0; i < g.edge_count(); ++i)
    if (colour[i] != 1 && colour[i] != 2)
      return ValidationReport::fail("edge " + std::to_string(g.edge(i).id) +
                                    " has colour outside {1,2}");
  return ValidationReport::pass();
}

// Both colour classes must be spanning trees (graph must have 2(n-1) edges).
inline ValidationReport validate_double_tree_decomposition(const MultiGraph& g,
                                                           const std::vector<int>& colour) {
  if (auto r = validate_colours(g, colour); !r.ok) return r;
  std::vector<int> cls[3];
  for (int i = 0; i < g.edge_count(); ++i) cls[colour[i]].push_back(i);
  for (int c = 1; c <= 2; ++c) {
    auto r = detail::check_spanning_tree(g, cls[c], "class " + std::to_string(c));
    if (!r.ok) return r;
  }
  return ValidationReport::pass();
}

// The colour classes restricted to the tree part must be spanning trees;
// leftover edges may take either colour.
inline ValidationReport validate_split_decomposition(const MultiGraph& g,
                                                     const SplitDecomposition& sd) {
  if (auto r = validate_colours(g, sd.colour); !r.ok) return r;
  if (sd.in_m.size() != sd.colour.size())
    return ValidationReport::fail("tree-part mask size mismatch");
  std::vector<int> cls[3];
  for (int i = 0; i < g.edge_count(); ++i)
    if (!sd.in_m[i]) cls[sd.colour[i]].push_back(i);
  for (int c = 1; c <= 2; ++c) {
    auto r = detail::check_spanning_tree(g, cls[c], "tree class " + std::to_string(c));
    if (!r.ok) return r;
  }
  return ValidationReport::pass();
}

// Number of colour-c edges at v.
inline int colour_degree(const MultiGraph& g, const std::vector<int>& colour, int v, int c) {
  int k = 0;
  for (int i = 0; i < g.edge_count(); ++i)
    if (colour[i] == c && (g.edge(i).u == v || g.edge(i).v == v)) ++k;
  return k;
}

struct ImbalanceReport {
  int max_diff = 0;
  int argmax_vertex = 0;           // smallest vertex attaining max_diff
  std::vector<int> diff;           // 1-based per-vertex |d1 - d2|
};

inline ImbalanceReport imbalance(const MultiGraph& g, const std::vector<int>& colour) {
  int n = g.vertex_count();
  std::vector<int> d1(n + 1, 0), d2(n + 1, 0);
  for (int i = 0; i < g.edge_count(); ++i) {
    auto& d = colour[i] == 1 ? d1 : d2;
    ++d[g.edge(i).u];
    ++d[g.edge(i).v];
  }
  ImbalanceReport rep;
  rep.diff.assign(n + 1, 0);
  for (int v = 1; v <= n; ++v) {
    rep.diff[v] = std::abs(d1[v] - d2[v]);
    if (rep.diff[v] > rep.max_diff) {
      rep.max_diff = rep.diff[v];
      rep.argmax_vertex = v;
    }
  }
  if (rep.argmax_vertex == 0 && n > 0) rep.argmax_vertex = 1;
  return rep;
}

inline bool is_c_balanced(const MultiGraph& g, const std::vector<int>& colour, int c) {
  return imbalance(g, colour).max_diff <= c;
}

// --- file formats ---

inline void serialize_decomposition(const MultiGraph& g, const std::vector<int>& colour,
                                    std::ostream& out) {
  assert(colour.size() == static_cast<size_t>(g.edge_count()));
  for (int i = 0; i < g.edge_count(); ++i)
    out << "c " << g.edge(i).id << ' ' << colour[i] << '\n';
}

inline Decomposition parse_decomposition(const MultiGraph& g, std::istream& in) {
  Decomposition d;
  d.colour.assign(g.edge_count(), 0);
  std::string line;
  int lineno = 0, seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::significant_line(line)) continue;
    std::istringstream ls(line);
    std::string kind;
    int id, col;
    if (!(ls >> kind) || kind != "c" || !(ls >> id >> col))
      throw ParseError(lineno, "expected 'c <edge_id> <colour>'");
    if (col != 1 && col != 2) throw ParseError(lineno, "colour must be 1 or 2");
    auto idx = g.index_of(id);
    if (!idx) throw ParseError(lineno, "unknown edge id " + std::to_string(id));
    if (d.colour[*idx] != 0) throw ParseError(lineno, "duplicate edge id " + std::to_string(id));
    d.colour[*idx] = col;
    ++seen;
  }
  if (seen != g.edge_count())
    throw ParseError(lineno, "decomposition covers " + std::to_string(seen) + " of " +
                                 std::to_string(g.edge_count()) + " edges");
  return d;
}

inline void serialize_partition(const std::vector<std::vector<int>>& parts, std::ostream& out) {
  for (const auto& part : parts) {
    out << "part";
    for (int v : part) out << ' ' << v;
    out << '\n';
  }
}

inline std::vector<std::vector<int>> parse_partition(std::istream& in) {
  std::vector<std::vector<int>> parts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::significant_line(line)) continue;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind != "part") throw ParseError(lineno, "expected 'part <v> ...'");
    std::vector<int> part;
    int v;
    while (ls >> v) part.push_back(v);
    if (part.empty()) throw ParseError(lineno, "empty partition class");
    parts.push_back(std::move(part));
  }
  return parts;
}

}  // namespace treebal
