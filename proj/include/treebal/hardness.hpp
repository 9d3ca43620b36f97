// Hardness gadget: deciding whether a 4-regular multigraph carries two
// edge-disjoint Hamiltonian cycles reduces to deciding perfectly balanced
// double tree decomposition. The pivot vertex is split into two 2-vertices
// x, y (one per pair of its four edge slots); a perfectly balanced
// decomposition of a split graph puts exactly one tree edge of each class at
// x and y and two per class everywhere else, i.e. each class is a
// Hamiltonian x-y path, i.e. a Hamiltonian cycle of the original graph.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "treebal/common.hpp"
#include "treebal/graph.hpp"
#include "treebal/decomposition.hpp"
#include "treebal/oracle.hpp"

namespace treebal {

constexpr int kNumPairings = 3;

inline bool is_regular(const MultiGraph& g, int d) {
  auto deg = g.degrees();  // 1-based; slot 0 is unused
  for (int v = 1; v <= g.vertex_count(); ++v)
    if (deg[v] != d) return false;
  return g.vertex_count() > 0;
}

// Splits the pivot (vertex 1) of a 4-regular multigraph into x (reusing the
// pivot's index) and y (index n+1). The pivot's four edge instances, in id
// order e1 < e2 < e3 < e4, are paired as {e1,e2|e3,e4}, {e1,e3|e2,e4},
// {e1,e4|e2,e3} for pairing = 0, 1, 2; the first pair stays at x, the second
// moves to y. Edge ids are preserved, so decompositions map back by id.
inline MultiGraph split_vertex(const MultiGraph& g, int pairing) {
  if (pairing < 0 || pairing >= kNumPairings)
    throw std::invalid_argument("pairing must be 0, 1 or 2");
  const int pivot = 1;
  if (g.vertex_count() < 2) throw std::invalid_argument("graph too small to split");
  std::vector<int> slots;
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    if (e.u == pivot || e.v == pivot) slots.push_back(i);
  }
  if (slots.size() != 4)
    throw std::invalid_argument("split pivot must have exactly four edge slots");
  const int mate = 1 + pairing;  // slot index paired with slot 0
  std::array<bool, 4> stays{};
  stays[0] = stays[mate] = true;

  const int y = g.vertex_count() + 1;
  MultiGraph out(y);
  int slot_at = 0;
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    int u = e.u, v = e.v;
    if (u == pivot || v == pivot) {
      bool keep = stays[slot_at++];
      if (!keep) (u == pivot ? u : v) = y;
    }
    out.add_edge_with_id(e.id, u, v);
  }
  return out;
}

struct NpDecision {
  bool yes = false;
  int pairing = -1;          // which split certified yes
  Decomposition witness;     // perfectly balanced decomposition of that split
};

// Tries all three pairings; yes iff some split graph admits a perfectly
// balanced double tree decomposition.
inline NpDecision decide_via_reduction(const MultiGraph& g, int jobs = 1) {
  if (!is_regular(g, 4)) throw std::invalid_argument("instance must be 4-regular");
  for (int pairing = 0; pairing < kNumPairings; ++pairing) {
    MultiGraph split = split_vertex(g, pairing);
    Decomposition witness;
    if (pbdt(split, &witness, jobs)) return {true, pairing, std::move(witness)};
  }
  return {};
}

// Orders a Hamiltonian cycle's edge ids along the cycle starting from the
// smallest vertex; used for stable, human-readable witnesses.
inline std::vector<int> cycle_vertex_order(const MultiGraph& g, const std::vector<int>& edge_ids) {
  const int n = g.vertex_count();
  std::vector<std::vector<std::pair<int, int>>> adj(n + 1);  // vertex -> (nbr, id)
  for (int id : edge_ids) {
    auto idx = g.index_of(id);
    if (!idx) throw std::invalid_argument("unknown edge id in cycle");
    const Edge& e = g.edge(*idx);
    adj[e.u].emplace_back(e.v, id);
    adj[e.v].emplace_back(e.u, id);
  }
  std::vector<int> order;
  int at = 1, prev_id = -1;
  for (int step = 0; step < n; ++step) {
    order.push_back(at);
    if (adj[at].size() != 2) throw std::invalid_argument("edge set is not a 2-factor");
    auto [nbr, id] = (adj[at][0].second != prev_id) ? adj[at][0] : adj[at][1];
    prev_id = id;
    at = nbr;
  }
  if (at != 1) throw std::invalid_argument("edge set is not a single cycle");
  return order;
}

// Pulls the perfectly balanced decomposition of a split graph back to a pair
// of edge-disjoint Hamiltonian cycles of the original graph (by edge id) and
// verifies both.
inline HamPair map_witness(const MultiGraph& g, const MultiGraph& split,
                           const Decomposition& witness) {
  if (static_cast<int>(witness.colour.size()) != split.edge_count())
    throw std::invalid_argument("witness does not match the split graph");
  HamPair pair;
  for (int i = 0; i < split.edge_count(); ++i)
    (witness.colour[i] == 1 ? pair.cycle1 : pair.cycle2).push_back(split.edge(i).id);
  if (!is_hamiltonian_cycle(g, pair.cycle1) || !is_hamiltonian_cycle(g, pair.cycle2))
    throw InvariantViolation("mapped witness is not a Hamiltonian cycle pair");
  return pair;
}

}  // namespace treebal
