// Shared named instances and corpus builders for the test suites.
#pragma once

#include <utility>
#include <vector>

#include "treebal/decomposition.hpp"
#include "treebal/generators.hpp"
#include "treebal/graph.hpp"

namespace fixtures {

inline treebal::MultiGraph complete(int n) {
  treebal::MultiGraph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
  return g;
}

inline treebal::MultiGraph k4() { return complete(4); }
inline treebal::MultiGraph k5() { return complete(5); }

// Star K_{1,n-1} with every edge doubled: a double tree (both classes = star).
inline treebal::MultiGraph doubled_star(int n) {
  treebal::MultiGraph g(n);
  for (int v = 2; v <= n; ++v) {
    g.add_edge(1, v);
    g.add_edge(1, v);
  }
  return g;
}

// Path with every edge doubled: a double tree (both classes = path).
inline treebal::MultiGraph doubled_path(int n) {
  treebal::MultiGraph g(n);
  for (int v = 1; v < n; ++v) {
    g.add_edge(v, v + 1);
    g.add_edge(v, v + 1);
  }
  return g;
}

// The minimum-imbalance-2 fixture: triangle v,u,s with doubled pendant edges
// u-u1, s-s1 and the edge u1-s1. Degrees 2,4,4,3,3; every decomposition
// leaves some vertex with colour degrees differing by at least 2.
// Vertices: v=1, u=2, s=3, u1=4, s1=5.
inline treebal::MultiGraph pendant_triangle() {
  treebal::MultiGraph g(5);
  g.add_edge(1, 2);  // v-u
  g.add_edge(1, 3);  // v-s
  g.add_edge(2, 3);  // u-s
  g.add_edge(2, 4);  // u-u1
  g.add_edge(2, 4);
  g.add_edge(3, 5);  // s-s1
  g.add_edge(3, 5);
  g.add_edge(4, 5);  // u1-s1
  return g;
}

// Circulant C_n(1,2): 4-regular for n >= 5.
inline treebal::MultiGraph circulant_12(int n) {
  treebal::MultiGraph g(n);
  for (int i = 1; i <= n; ++i) g.add_edge(i, i % n + 1);
  for (int i = 1; i <= n; ++i) {
    int j = (i + 1) % n + 1;
    if (i < j)
      g.add_edge(i, j);
    else
      g.add_edge(j, i);
  }
  return g;
}

// Two K5-minus-an-edge blocks bridged by two edges: 4-regular with a 2-edge
// cut, so no two edge-disjoint Hamiltonian cycles exist.
inline treebal::MultiGraph bridged_gadget() {
  treebal::MultiGraph g(10);
  auto block = [&](int base, int skip_u, int skip_v) {
    for (int u = 1; u <= 5; ++u)
      for (int v = u + 1; v <= 5; ++v)
        if (!(u == skip_u && v == skip_v)) g.add_edge(base + u, base + v);
  };
  block(0, 4, 5);
  block(5, 4, 5);
  g.add_edge(4, 9);
  g.add_edge(5, 10);
  return g;
}

inline treebal::MultiGraph petersen() {
  treebal::MultiGraph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i + 1, (i + 1) % 5 + 1);       // outer cycle
    g.add_edge(i + 6, (i + 2) % 5 + 6);       // inner pentagram
    g.add_edge(i + 1, i + 6);                 // spokes
  }
  return g;
}

// A double tree assembled from two explicit spanning trees of K_n; colours
// follow the construction (tree 1 edges first).
inline treebal::MultiGraph from_tree_pair(int n,
                                          const std::vector<std::pair<int, int>>& t1,
                                          const std::vector<std::pair<int, int>>& t2) {
  treebal::MultiGraph g(n);
  for (auto [u, v] : t1) g.add_edge(u, v);
  for (auto [u, v] : t2) g.add_edge(u, v);
  return g;
}

inline treebal::SplitDecomposition construction_split(int n) {
  treebal::SplitDecomposition sd;
  if (n < 2) return sd;
  sd.colour.assign(2 * (n - 1), 0);
  sd.in_m.assign(2 * (n - 1), 0);
  for (int i = 0; i < n - 1; ++i) sd.colour[i] = 1;
  for (int i = n - 1; i < 2 * (n - 1); ++i) sd.colour[i] = 2;
  return sd;
}

// All labelled trees on n vertices, by decoding every Prüfer sequence.
inline std::vector<std::vector<std::pair<int, int>>> all_trees(int n) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (n <= 2) {
    out.push_back(treebal::prufer_decode(n, {}));
    return out;
  }
  std::vector<int> seq(n - 2, 1);
  while (true) {
    out.push_back(treebal::prufer_decode(n, seq));
    int i = n - 3;
    while (i >= 0 && seq[i] == n) seq[i--] = 1;
    if (i < 0) break;
    ++seq[i];
  }
  return out;
}

struct CorpusEntry {
  treebal::MultiGraph graph;
  treebal::SplitDecomposition split;  // the construction decomposition
};

// Every ordered pair of spanning trees of K_n for n <= max_exhaustive, plus
// seeded random double trees for n in (max_exhaustive, max_sampled], plus the
// named special instances. All entries are double trees (m = 2(n-1)).
inline std::vector<CorpusEntry> double_tree_corpus(int max_exhaustive = 5,
                                                   int max_sampled = 8,
                                                   int samples_per_n = 20) {
  std::vector<CorpusEntry> corpus;
  for (int n = 2; n <= max_exhaustive; ++n) {
    auto trees = all_trees(n);
    for (const auto& t1 : trees)
      for (const auto& t2 : trees)
        corpus.push_back({from_tree_pair(n, t1, t2), construction_split(n)});
  }
  for (int n = max_exhaustive + 1; n <= max_sampled; ++n)
    for (int s = 0; s < samples_per_n; ++s) {
      auto g = treebal::random_double_tree(n, 1000 * n + s);
      corpus.push_back({g, construction_split(n)});
    }
  for (auto* make : {doubled_star, doubled_path}) {
    for (int n : {3, 5, 8}) {
      auto g = make(n);
      corpus.push_back({g, construction_split(0)});
      auto& e = corpus.back();
      // Doubled-edge instances interleave the two trees edge by edge.
      int m = g.edge_count();
      e.split.colour.assign(m, 0);
      e.split.in_m.assign(m, 0);
      for (int i = 0; i < m; ++i) e.split.colour[i] = i % 2 + 1;
    }
  }
  {
    CorpusEntry e{k4(), construction_split(0)};
    // One hand-picked double tree split of K4: paths 1-2-3-4 and 2-4-1-3.
    // Edge order in complete(4): (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
    e.split.colour = {1, 2, 2, 1, 2, 1};
    e.split.in_m.assign(6, 0);
    corpus.push_back(std::move(e));
  }
  {
    CorpusEntry e{pendant_triangle(), construction_split(0)};
    // Trees: {vu, us, u-u1 (first copy), s-s1 (first copy)} and
    //        {vs, u-u1 (second copy), s-s1 (second copy), u1-s1}.
    // Edge order: vu, vs, us, uu1, uu1', ss1, ss1', u1s1.
    e.split.colour = {1, 2, 1, 1, 2, 1, 2, 2};
    e.split.in_m.assign(8, 0);
    corpus.push_back(std::move(e));
  }
  return corpus;
}

}  // namespace fixtures
