// Disjoint-set forests: a plain one and an undoable one for backtracking search.
#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace treebal {

// Union by size with path compression. Elements are 0..n-1.
struct UnionFind {
  std::vector<int> parent;
  std::vector<int> size;
  int components;

  explicit UnionFind(int n) : parent(n), size(n, 1), components(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  // Returns false if x and y were already joined.
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (size[x] < size[y]) std::swap(x, y);
    parent[y] = x;
    size[x] += size[y];
    --components;
    return true;
  }

  bool same(int x, int y) { return find(x) == find(y); }
};

// Union by size without path compression so that unions can be rolled back in
// LIFO order. find is O(log n), good enough for exhaustive search on small graphs.
struct UndoableUnionFind {
  std::vector<int> parent;
  std::vector<int> size;
  int components;
  // Log of roots that were attached; empty entry (-1) marks a no-op union.
  std::vector<int> log;

  explicit UndoableUnionFind(int n) : parent(n), size(n, 1), components(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  int find(int x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }

  bool same(int x, int y) const { return find(x) == find(y); }

  // Always records an entry so undo() stays in lockstep with unite() calls.
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) {
      log.push_back(-1);
      return false;
    }
    if (size[x] < size[y]) std::swap(x, y);
    parent[y] = x;
    size[x] += size[y];
    --components;
    log.push_back(y);
    return true;
  }

  void undo() {
    assert(!log.empty());
    int y = log.back();
    log.pop_back();
    if (y < 0) return;
    size[parent[y]] -= size[y];
    parent[y] = y;
    ++components;
  }
};

}  // namespace treebal
