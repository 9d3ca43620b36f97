// Seeded random instance generators. All deterministic given (parameters, seed).
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "treebal/common.hpp"
#include "treebal/graph.hpp"

namespace treebal {

// Decodes a Prüfer sequence over vertices 1..n into tree edges. A uniformly
// random sequence yields a uniformly random labelled tree.
inline std::vector<std::pair<int, int>> prufer_decode(int n, const std::vector<int>& seq) {
  std::vector<std::pair<int, int>> edges;
  if (n <= 1) return edges;
  if (n == 2) {
    edges.emplace_back(1, 2);
    return edges;
  }
  std::vector<int> deg(n + 1, 1);
  for (int a : seq) ++deg[a];
  std::vector<char> used(n + 1, 0);
  int ptr = 1;
  while (deg[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int a : seq) {
    edges.emplace_back(leaf, a);
    if (--deg[a] == 1 && a < ptr) {
      leaf = a;
    } else {
      ++ptr;
      while (deg[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, n);
  return edges;
}

inline std::vector<std::pair<int, int>> random_tree_edges(int n, Rng& rng) {
  if (n <= 1) return {};
  std::vector<int> seq(std::max(0, n - 2));
  for (int& a : seq) a = rng.range(1, n);
  return prufer_decode(n, seq);
}

// Union of two independent uniformly random spanning trees on n vertices.
// Parallel edges between the trees are expected and fine.
inline MultiGraph random_double_tree(int n, std::uint64_t seed) {
  Rng rng(seed);
  MultiGraph g(n);
  for (auto [u, v] : random_tree_edges(n, rng)) g.add_edge(u, v);
  for (auto [u, v] : random_tree_edges(n, rng)) g.add_edge(u, v);
  return g;
}

// Double tree plus `extra` uniformly random additional edges (no self-loops).
inline MultiGraph random_double_tree_plus(int n, int extra, std::uint64_t seed) {
  Rng rng(seed);
  MultiGraph g(n);
  for (auto [u, v] : random_tree_edges(n, rng)) g.add_edge(u, v);
  for (auto [u, v] : random_tree_edges(n, rng)) g.add_edge(u, v);
  for (int i = 0; i < extra && n >= 2; ++i) {
    int u = rng.range(1, n);
    int v = rng.range(1, n - 1);
    if (v >= u) ++v;
    g.add_edge(u, v);
  }
  return g;
}

// Random simple d-regular graph via the pairing model with rejection.
// Requires n*d even and n > d.
inline MultiGraph random_regular_graph(int n, int d, std::uint64_t seed) {
  if (n * d % 2 != 0 || n <= d)
    throw InvariantViolation("no simple " + std::to_string(d) + "-regular graph on " +
                             std::to_string(n) + " vertices");
  Rng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> stubs(n * d);
    for (int v = 1; v <= n; ++v)
      for (int k = 0; k < d; ++k) stubs[(v - 1) * d + k] = v;
    // Fisher-Yates, then pair consecutive stubs.
    for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i) {
      int j = static_cast<int>(rng.below(i + 1));
      std::swap(stubs[i], stubs[j]);
    }
    std::vector<std::pair<int, int>> pairs;
    std::vector<char> seen(n * n, 0);
    bool ok = true;
    for (size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) ok = false;
      else {
        int key = (std::min(u, v) - 1) * n + (std::max(u, v) - 1);
        if (seen[key]) ok = false;  // reject parallel edges: simple graph wanted
        seen[key] = 1;
        pairs.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
    if (!ok) continue;
    std::sort(pairs.begin(), pairs.end());
    MultiGraph g(n);
    for (auto [u, v] : pairs) g.add_edge(u, v);
    return g;
  }
  throw InvariantViolation("pairing model failed to produce a simple regular graph");
}

}  // namespace treebal
