// Maximum packing of two edge-disjoint spanning trees (matroid-union style
// augmentation). Either yields a split decomposition — two spanning trees plus
// leftover edges — or an infeasibility certificate: a vertex partition P with
// fewer than 2(|P|-1) crossing edges, which no two spanning trees can satisfy.
#pragma once

#include <algorithm>
#include <cassert>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "treebal/decomposition.hpp"
#include "treebal/graph.hpp"
#include "treebal/union_find.hpp"

namespace treebal {

struct PackResult {
  bool feasible = false;
  SplitDecomposition split;                // set when feasible
  std::vector<std::vector<int>> witness;   // set when infeasible
};

// A partition refutes feasibility if fewer than 2(|P|-1) edges cross between
// classes: two spanning trees each need at least |P|-1 crossing edges.
inline ValidationReport verify_infeasibility_witness(const MultiGraph& g,
                                                     const std::vector<std::vector<int>>& parts) {
  int n = g.vertex_count();
  std::vector<int> cls(n + 1, 0);
  int covered = 0;
  for (size_t p = 0; p < parts.size(); ++p) {
    for (int v : parts[p]) {
      if (v < 1 || v > n) return ValidationReport::fail("witness names unknown vertex");
      if (cls[v] != 0) return ValidationReport::fail("witness repeats a vertex");
      cls[v] = static_cast<int>(p) + 1;
      ++covered;
    }
  }
  if (covered != n) return ValidationReport::fail("witness does not cover all vertices");
  if (parts.size() < 2) return ValidationReport::fail("witness needs at least two classes");
  long long crossing = 0;
  for (const Edge& e : g.edges())
    if (cls[e.u] != cls[e.v]) ++crossing;
  long long needed = 2LL * (static_cast<long long>(parts.size()) - 1);
  if (crossing >= needed)
    return ValidationReport::fail("witness has " + std::to_string(crossing) +
                                  " crossing edges, needs fewer than " + std::to_string(needed));
  return ValidationReport::pass();
}

namespace detail {

class TreePacker {
 public:
  explicit TreePacker(const MultiGraph& g)
      : g_(g), n_(g.vertex_count()), m_(g.edge_count()), own_(m_, 0) {}

  PackResult run() {
    int packed = 0;
    std::vector<int> failed;
    for (int i = 0; i < m_; ++i) {
      if (packed == 2 * (n_ - 1)) break;  // both trees complete, rest is leftover
      if (insert(i)) {
        ++packed;
      } else {
        failed.push_back(i);
      }
    }
    PackResult res;
    if (packed == 2 * (n_ - 1)) {
      res.feasible = true;
      res.split.colour.assign(m_, 1);
      res.split.in_m.assign(m_, 1);
      for (int i = 0; i < m_; ++i) {
        if (own_[i] != 0) {
          res.split.colour[i] = own_[i];
          res.split.in_m[i] = 0;
        }
      }
    } else {
      res.feasible = false;
      res.witness = build_witness();
    }
    return res;
  }

 private:
  // Component id of v among edges owned by forest f (0 = treat as empty graph).
  std::vector<int> components(int f) const {
    std::vector<int> comp(n_ + 1, 0);
    UnionFind uf(n_ + 1);
    for (int i = 0; i < m_; ++i)
      if (own_[i] == f) uf.unite(g_.edge(i).u, g_.edge(i).v);
    for (int v = 1; v <= n_; ++v) comp[v] = uf.find(v);
    return comp;
  }

  // Unique path between u and v among forest f's edges; empty if disconnected.
  std::vector<int> forest_path(int f, int u, int v) const {
    std::vector<std::vector<std::pair<int, int>>> adj(n_ + 1);  // (position, other)
    for (int i = 0; i < m_; ++i)
      if (own_[i] == f) {
        const Edge& e = g_.edge(i);
        adj[e.u].emplace_back(i, e.v);
        adj[e.v].emplace_back(i, e.u);
      }
    std::vector<int> via_edge(n_ + 1, -1), via_vertex(n_ + 1, 0);
    std::vector<char> seen(n_ + 1, 0);
    std::queue<int> q;
    q.push(u);
    seen[u] = 1;
    while (!q.empty() && !seen[v]) {
      int x = q.front();
      q.pop();
      for (auto [pos, y] : adj[x]) {
        if (seen[y]) continue;
        seen[y] = 1;
        via_edge[y] = pos;
        via_vertex[y] = x;
        q.push(y);
      }
    }
    std::vector<int> path;
    if (!seen[v]) return path;
    for (int x = v; x != u; x = via_vertex[x]) path.push_back(via_edge[x]);
    return path;
  }

  // Tries to place edge position e0 (possibly relocating owned edges between
  // the forests along an exchange chain).
  bool insert(int e0) {
    std::vector<int> parent(m_, -1);
    parent[e0] = e0;  // root marker
    std::queue<int> q;
    q.push(e0);
    labelled_.assign(1, e0);
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      const Edge& fe = g_.edge(f);
      for (int forest = 1; forest <= 2; ++forest) {
        if (own_[f] == forest) continue;
        auto comp = components(forest);
        if (comp[fe.u] != comp[fe.v]) {
          augment(f, forest, parent, e0);
          return true;
        }
        for (int p : forest_path(forest, fe.u, fe.v)) {
          if (parent[p] != -1) continue;
          parent[p] = f;
          labelled_.push_back(p);
          q.push(p);
        }
      }
    }
    // Exchange search exhausted: remember the blocking cluster for the witness.
    std::vector<char> in_cluster(n_ + 1, 0);
    for (int p : labelled_) {
      in_cluster[g_.edge(p).u] = 1;
      in_cluster[g_.edge(p).v] = 1;
    }
    clusters_.push_back(std::move(in_cluster));
    return false;
  }

  void augment(int f, int forest, const std::vector<int>& parent, int e0) {
    int cur = f, target = forest;
    while (true) {
      int prev = own_[cur];
      own_[cur] = target;
      if (cur == e0) {
        assert(prev == 0);
        break;
      }
      assert(prev != 0);
      target = prev;  // the next edge up the chain takes cur's old slot
      cur = parent[cur];
    }
  }

  std::vector<std::vector<int>> build_witness() const {
    UnionFind uf(n_ + 1);
    for (const auto& cluster : clusters_) {
      int anchor = 0;
      for (int v = 1; v <= n_; ++v) {
        if (!cluster[v]) continue;
        if (anchor == 0)
          anchor = v;
        else
          uf.unite(anchor, v);
      }
    }
    std::vector<std::vector<int>> parts;
    std::vector<int> slot(n_ + 1, -1);
    for (int v = 1; v <= n_; ++v) {
      int r = uf.find(v);
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(parts.size());
        parts.emplace_back();
      }
      parts[slot[r]].push_back(v);
    }
    return parts;
  }

  const MultiGraph& g_;
  int n_, m_;
  std::vector<int> own_;                 // 0 = unplaced, 1/2 = forest
  std::vector<int> labelled_;
  std::vector<std::vector<char>> clusters_;
};

}  // namespace detail

// Packs two edge-disjoint spanning trees if possible. Feasible result: colours
// 1/2 are the trees, leftover edges carry colour 1 and the leftover flag.
// Infeasible result: a partition certificate (verified before returning).
inline PackResult pack_double_tree(const MultiGraph& g) {
  int n = g.vertex_count();
  PackResult res;
  if (n == 0) {
    res.feasible = true;
    return res;
  }
  // Disconnected inputs get the component partition as an immediate witness.
  {
    UnionFind uf(n + 1);
    for (const Edge& e : g.edges()) uf.unite(e.u, e.v);
    std::vector<int> slot(n + 1, -1);
    std::vector<std::vector<int>> comps;
    for (int v = 1; v <= n; ++v) {
      int r = uf.find(v);
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(comps.size());
        comps.emplace_back();
      }
      comps[slot[r]].push_back(v);
    }
    if (comps.size() > 1) {
      res.feasible = false;
      res.witness = std::move(comps);
      auto check = verify_infeasibility_witness(g, res.witness);
      if (!check.ok) throw InvariantViolation("bad disconnectedness witness: " + check.detail);
      return res;
    }
  }
  res = detail::TreePacker(g).run();
  if (res.feasible) {
    auto check = validate_split_decomposition(g, res.split);
    if (!check.ok) throw InvariantViolation("packer produced invalid split: " + check.detail);
  } else {
    auto check = verify_infeasibility_witness(g, res.witness);
    if (!check.ok) throw InvariantViolation("packer produced bad witness: " + check.detail);
  }
  return res;
}

}  // namespace treebal
