// Mutable working state for the reduce/reconstruct engine, plus the edge-swap
// primitive. The state is an overlay over a growing edge/vertex store: edges
// and vertices are never renumbered, only killed and revived; fresh edge ids
// and vertex ids strictly increase.
#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "treebal/decomposition.hpp"
#include "treebal/graph.hpp"
#include "treebal/union_find.hpp"

namespace treebal {

class BalancerState {
 public:
  struct WEdge {
    int id;
    int u, v;
    int colour;   // 1 or 2
    bool in_m;    // leftover edge: counts for balance, not part of the trees
    bool alive;

    int other(int w) const {
      assert(w == u || w == v);
      return w == u ? v : u;
    }
  };

  BalancerState(const MultiGraph& g, const SplitDecomposition& sd, int c_)
      : c(c_), orig_n(g.vertex_count()), orig_m(g.edge_count()) {
    assert(static_cast<int>(sd.colour.size()) == orig_m);
    v_alive.assign(orig_n + 1, 1);
    v_alive[0] = 0;
    alive_vertices = orig_n;
    next_vertex = orig_n + 1;
    inc.assign(orig_n + 1, {});
    next_edge_id = 1;
    for (int i = 0; i < orig_m; ++i) {
      const Edge& e = g.edge(i);
      edges.push_back({e.id, e.u, e.v, sd.colour[i], sd.in_m[i] != 0, true});
      inc[e.u].push_back(i);
      inc[e.v].push_back(i);
      if (sd.in_m[i]) ++m_alive;
      next_edge_id = std::max(next_edge_id, e.id + 1);
    }
  }

  // --- structure queries (alive sub-multigraph) ---

  bool edge_alive(int pos) const { return edges[pos].alive; }

  int degree(int v) const {
    int d = 0;
    for (int pos : inc[v]) d += edges[pos].alive;
    return d;
  }

  int a_degree(int v) const {
    int d = 0;
    for (int pos : inc[v])
      if (edges[pos].alive && !edges[pos].in_m) ++d;
    return d;
  }

  int colour_degree(int v, int col) const {
    int d = 0;
    for (int pos : inc[v])
      if (edges[pos].alive && edges[pos].colour == col) ++d;
    return d;
  }

  int diff(int v) const {
    return std::abs(colour_degree(v, 1) - colour_degree(v, 2));
  }

  bool balanced_at(int v) const { return diff(v) <= c; }

  // Alive incident edge positions, ascending id (incidence lists grow in id order).
  std::vector<int> slots(int v) const {
    std::vector<int> out;
    for (int pos : inc[v])
      if (edges[pos].alive) out.push_back(pos);
    return out;
  }

  bool is_small(int v) const { return degree(v) <= c + 2; }
  bool is_big(int v) const { return degree(v) > c + 2; }
  bool is_critical(int v) const { return degree(v) == c + 3; }

  // Minority colour at v; ties towards colour 1.
  int minority_colour(int v) const {
    return colour_degree(v, 2) < colour_degree(v, 1) ? 2 : 1;
  }

  // --- mutation primitives (used by reductions and reconstruction) ---

  int add_vertex() {
    int v = next_vertex++;
    v_alive.resize(v + 1, 0);
    inc.resize(v + 1);
    v_alive[v] = 1;
    ++alive_vertices;
    return v;
  }

  void kill_vertex(int v) {
    assert(v_alive[v]);
    // All incident edges must already be dead.
    for ([[maybe_unused]] int pos : inc[v]) assert(!edges[pos].alive);
    v_alive[v] = 0;
    --alive_vertices;
  }

  void revive_vertex(int v) {
    assert(!v_alive[v]);
    v_alive[v] = 1;
    ++alive_vertices;
  }

  int add_edge(int u, int v, int colour, bool in_m) {
    assert(v_alive[u] && v_alive[v] && u != v);
    int pos = static_cast<int>(edges.size());
    edges.push_back({next_edge_id++, u, v, colour, in_m, true});
    inc[u].push_back(pos);
    inc[v].push_back(pos);
    if (in_m) ++m_alive;
    return pos;
  }

  void kill_edge(int pos) {
    assert(edges[pos].alive);
    edges[pos].alive = false;
    if (edges[pos].in_m) --m_alive;
  }

  void revive_edge(int pos, int colour, bool in_m) {
    assert(!edges[pos].alive);
    edges[pos].alive = true;
    edges[pos].colour = colour;
    edges[pos].in_m = in_m;
    if (in_m) ++m_alive;
  }

  // --- global checks ---

  bool base_case() const {
    if (m_alive > 0) return false;
    for (int v = 1; v < static_cast<int>(v_alive.size()); ++v)
      if (v_alive[v] && is_big(v)) return false;
    return true;
  }

  // Both colour classes of the tree part must be spanning trees of the alive
  // vertices. (Balance is checked separately.)
  ValidationReport validate_structure() const {
    int n = alive_vertices;
    int cnt[3] = {0, 0, 0};
    UnionFind uf1(static_cast<int>(v_alive.size()));
    UnionFind uf2(static_cast<int>(v_alive.size()));
    for (const WEdge& e : edges) {
      if (!e.alive) continue;
      if (!v_alive[e.u] || !v_alive[e.v])
        return ValidationReport::fail("edge " + std::to_string(e.id) + " touches dead vertex");
      if (e.in_m) continue;
      ++cnt[e.colour];
      UnionFind& uf = e.colour == 1 ? uf1 : uf2;
      if (!uf.unite(e.u, e.v))
        return ValidationReport::fail("tree class " + std::to_string(e.colour) +
                                      " has a cycle at edge " + std::to_string(e.id));
    }
    for (int col = 1; col <= 2; ++col)
      if (cnt[col] != n - 1)
        return ValidationReport::fail("tree class " + std::to_string(col) + " has " +
                                      std::to_string(cnt[col]) + " edges, expected " +
                                      std::to_string(n - 1));
    return ValidationReport::pass();
  }

  // Smallest alive vertex over the c-balance bound, or 0 if none.
  int first_unbalanced() const {
    for (int v = 1; v < static_cast<int>(v_alive.size()); ++v)
      if (v_alive[v] && !balanced_at(v)) return v;
    return 0;
  }

  std::string describe_vertex(int v) const {
    std::string s = "v" + std::to_string(v) + " deg=" + std::to_string(degree(v)) +
                    " split=(" + std::to_string(colour_degree(v, 1)) + "," +
                    std::to_string(colour_degree(v, 2)) + ") nbrs=[";
    for (int pos : slots(v)) {
      const WEdge& e = edges[pos];
      s += std::to_string(e.other(v)) + (e.in_m ? "M" : "") + " ";
    }
    s += "]";
    return s;
  }

  int c;
  int orig_n, orig_m;
  std::vector<WEdge> edges;            // append-only, ids ascending
  std::vector<char> v_alive;           // 1-based
  std::vector<std::vector<int>> inc;   // 1-based vertex -> edge positions
  int alive_vertices = 0;
  int m_alive = 0;                     // alive leftover edges
  int next_vertex = 1;
  int next_edge_id = 1;
};

// --- edge swap primitive ---
//
// Removing tree edge e from its class splits that tree in two; the unique
// tree path between e's endpoints in the other class crosses that cut at
// least once. The partner is the crossing path edge with the smallest id;
// recolouring e and the partner into each other's classes keeps both classes
// spanning trees.

// Partner position for swapping alive tree edge at position `pos`, or -1 if the
// state is too broken to tell (only happens on invalid inputs).
inline int swap_partner(const BalancerState& s, int pos) {
  const BalancerState::WEdge& e = s.edges[pos];
  assert(e.alive && !e.in_m);
  int own = e.colour;
  int other = 3 - own;
  int nv = static_cast<int>(s.v_alive.size());
  // Side of the cut containing e.u once e is removed from its class.
  std::vector<char> side(nv, 0);
  {
    std::queue<int> q;
    q.push(e.u);
    side[e.u] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int p : s.inc[x]) {
        const auto& f = s.edges[p];
        if (!f.alive || f.in_m || f.colour != own || p == pos) continue;
        int y = f.other(x);
        if (!side[y]) {
          side[y] = 1;
          q.push(y);
        }
      }
    }
  }
  if (side[e.v]) return -1;  // class was not a tree
  // Path between e.u and e.v in the other class.
  std::vector<int> via_edge(nv, -1), via_vertex(nv, 0);
  std::vector<char> seen(nv, 0);
  std::queue<int> q;
  q.push(e.u);
  seen[e.u] = 1;
  while (!q.empty() && !seen[e.v]) {
    int x = q.front();
    q.pop();
    for (int p : s.inc[x]) {
      const auto& f = s.edges[p];
      if (!f.alive || f.in_m || f.colour != other) continue;
      int y = f.other(x);
      if (seen[y]) continue;
      seen[y] = 1;
      via_edge[y] = p;
      via_vertex[y] = x;
      q.push(y);
    }
  }
  if (!seen[e.v]) return -1;
  int best = -1;
  for (int x = e.v; x != e.u; x = via_vertex[x]) {
    int p = via_edge[x];
    const auto& f = s.edges[p];
    if (side[f.u] != side[f.v]) {
      if (best < 0 || s.edges[p].id < s.edges[best].id) best = p;
    }
  }
  return best;
}

// Performs the swap; returns the partner position.
inline int perform_swap(BalancerState& s, int pos) {
  int partner = swap_partner(s, pos);
  if (partner < 0) throw InvariantViolation("swap on position without a partner");
  int own = s.edges[pos].colour;
  s.edges[pos].colour = 3 - own;
  s.edges[partner].colour = own;
  return partner;
}

// Builds a state directly from a plain double-tree decomposition (no leftover
// part); convenient for tests of the swap engine.
inline BalancerState make_state(const MultiGraph& g, const Decomposition& d, int c = 4) {
  SplitDecomposition sd;
  sd.colour = d.colour;
  sd.in_m.assign(d.colour.size(), 0);
  return BalancerState(g, sd, c);
}

}  // namespace treebal
