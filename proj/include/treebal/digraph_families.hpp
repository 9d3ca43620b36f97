// Directed counterexample families and their exhaustive certifiers.
//
// Family A ("arborescence", n >= 2, k >= 2): red directed path v1->...->vn
// plus a blue class {v1->vn} u {vn->vi : 2 <= i <= n-1}; k > 2 appends k-2
// extra copies of the red path. The unique partition into k spanning
// arborescences rooted at v1 has out-degree difference n-2 at vn.
//
// Family B ("strong", n >= 1, k = 2): vertices s, t, v1..vn; red directed
// cycle s->v1->...->vn->t->s; blue class {s->t} u {t->vi} u {vi->s}. The
// unique partition into two spanning strongly connected subdigraphs has
// out-degree difference n-1 at t.
//
// The certifiers enumerate ALL arc partitions (up to class relabelling, via
// first-use canonical class order) and validate each class exactly, so
// uniqueness claims are checked against the full search space. Enumeration
// refuses instances with more than 24 arcs.
#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treebal/common.hpp"
#include "treebal/graph.hpp"

namespace treebal {

constexpr int kMaxEnumArcs = 24;

inline MultiDigraph gen_arborescence_family(int n, int k = 2) {
  if (n < 2) throw std::invalid_argument("arborescence family needs n >= 2");
  if (k < 2) throw std::invalid_argument("arborescence family needs k >= 2");
  MultiDigraph d(n);
  for (int i = 1; i < n; ++i) d.add_arc(i, i + 1);  // red path
  d.add_arc(1, n);                                  // blue
  for (int i = 2; i < n; ++i) d.add_arc(n, i);      // blue fan
  for (int copy = 2; copy < k; ++copy)
    for (int i = 1; i < n; ++i) d.add_arc(i, i + 1);
  return d;
}

// Vertex roles in the strong family: s = 1, t = 2, v_i = i + 2.
inline MultiDigraph gen_strong_family(int n, int k = 2) {
  if (n < 1) throw std::invalid_argument("strong family needs n >= 1");
  if (k != 2) throw std::invalid_argument("strong family is defined for k = 2 only");
  const int s = 1, t = 2;
  MultiDigraph d(n + 2);
  d.add_arc(s, 3);                                      // red cycle
  for (int i = 1; i < n; ++i) d.add_arc(i + 2, i + 3);
  d.add_arc(n + 2, t);
  d.add_arc(t, s);
  d.add_arc(s, t);                                      // blue
  for (int i = 1; i <= n; ++i) d.add_arc(t, i + 2);
  for (int i = 1; i <= n; ++i) d.add_arc(i + 2, s);
  return d;
}

// An arc partition: cls[arc position] in [0, k).
struct ArcPartition {
  int k = 2;
  std::vector<int> cls;
};

inline bool is_spanning_arborescence(const MultiDigraph& d, const ArcPartition& part,
                                     int which, int root) {
  const int n = d.vertex_count();
  std::vector<std::vector<int>> out(n + 1);
  std::vector<int> indeg(n + 1, 0);
  int arcs = 0;
  for (int i = 0; i < d.arc_count(); ++i) {
    if (part.cls[i] != which) continue;
    const Arc& a = d.arc(i);
    out[a.tail].push_back(a.head);
    ++indeg[a.head];
    ++arcs;
  }
  if (arcs != n - 1 || indeg[root] != 0) return false;
  for (int v = 1; v <= n; ++v)
    if (v != root && indeg[v] != 1) return false;
  std::vector<char> seen(n + 1, 0);
  std::vector<int> stack = {root};
  seen[root] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : out[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n;
}

namespace detail {

inline int reach_count(const std::vector<std::vector<int>>& adj, int from, int n) {
  std::vector<char> seen(n + 1, 0);
  std::vector<int> stack = {from};
  seen[from] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached;
}

}  // namespace detail

inline bool is_spanning_strong(const MultiDigraph& d, const ArcPartition& part, int which) {
  const int n = d.vertex_count();
  std::vector<std::vector<int>> fwd(n + 1), bwd(n + 1);
  for (int i = 0; i < d.arc_count(); ++i) {
    if (part.cls[i] != which) continue;
    const Arc& a = d.arc(i);
    fwd[a.tail].push_back(a.head);
    bwd[a.head].push_back(a.tail);
  }
  return n > 0 && detail::reach_count(fwd, 1, n) == n && detail::reach_count(bwd, 1, n) == n;
}

namespace detail {

// Backtracking core shared by both certifiers. Classes are interchangeable, so
// partitions are enumerated up to relabelling: arc 0 goes to class 0 and a new
// class may only be opened in first-use order.
template <typename Assign, typename Unassign, typename Leaf>
inline void enumerate_partitions(int m, int k, Assign&& assign, Unassign&& unassign,
                                 Leaf&& leaf) {
  if (m > kMaxEnumArcs)
    throw OversizeError("instance has " + std::to_string(m) + " arcs; enumeration bound is " +
                        std::to_string(kMaxEnumArcs));
  std::vector<int> cls(m, -1);
  std::function<void(int, int)> go = [&](int i, int used) {
    if (i == m) {
      if (used == k) leaf(cls);
      return;
    }
    int limit = std::min(k - 1, used);  // first-use canonical order
    for (int c = 0; c <= limit; ++c) {
      if (!assign(i, c)) continue;
      cls[i] = c;
      go(i + 1, std::max(used, c + 1));
      cls[i] = -1;
      unassign(i, c);
    }
  };
  go(0, 0);
}

}  // namespace detail

// All partitions of d's arcs into k spanning arborescences rooted at root,
// up to class relabelling. Per-class in-degree bounds prune the search; each
// leaf is validated in full.
inline void enumerate_arborescence_partitions(
    const MultiDigraph& d, int root, int k,
    const std::function<void(const ArcPartition&)>& cb) {
  const int n = d.vertex_count();
  const int m = d.arc_count();
  if (root < 1 || root > n) throw std::invalid_argument("root out of range");
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (m != static_cast<long long>(k) * (n - 1)) return;  // partition sizes are forced
  std::vector<std::vector<int>> indeg(k, std::vector<int>(n + 1, 0));
  std::vector<int> size(k, 0);
  auto assign = [&](int i, int c) {
    const Arc& a = d.arc(i);
    if (a.head == root || indeg[c][a.head] == 1 || size[c] == n - 1) return false;
    ++indeg[c][a.head];
    ++size[c];
    return true;
  };
  auto unassign = [&](int i, int c) {
    --indeg[c][d.arc(i).head];
    --size[c];
  };
  auto leaf = [&](const std::vector<int>& cls) {
    ArcPartition part{k, cls};
    for (int c = 0; c < k; ++c)
      if (!is_spanning_arborescence(d, part, c, root)) return;
    cb(part);
  };
  detail::enumerate_partitions(m, k, assign, unassign, leaf);
}

inline std::vector<ArcPartition> enumerate_arborescence_partitions(const MultiDigraph& d,
                                                                   int root, int k = 2) {
  std::vector<ArcPartition> out;
  enumerate_arborescence_partitions(d, root, k,
                                    [&](const ArcPartition& p) { out.push_back(p); });
  return out;
}

// All partitions of d's arcs into k spanning strongly connected subdigraphs,
// up to class relabelling. Prunes when a vertex's out- or in-star is fully
// assigned and some class got none of it.
inline void enumerate_strong_partitions(const MultiDigraph& d, int k,
                                        const std::function<void(const ArcPartition&)>& cb) {
  const int n = d.vertex_count();
  const int m = d.arc_count();
  if (k < 1) throw std::invalid_argument("k must be positive");
  std::vector<int> last_out(n + 1, -1), last_in(n + 1, -1);
  for (int i = 0; i < m; ++i) {
    last_out[d.arc(i).tail] = i;
    last_in[d.arc(i).head] = i;
  }
  for (int v = 1; v <= n; ++v)
    if (n > 1 && (last_out[v] < 0 || last_in[v] < 0)) return;  // some vertex misses a class
  std::vector<std::vector<int>> outdeg(k, std::vector<int>(n + 1, 0));
  std::vector<std::vector<int>> indeg(k, std::vector<int>(n + 1, 0));
  auto assign = [&](int i, int c) {
    const Arc& a = d.arc(i);
    ++outdeg[c][a.tail];
    ++indeg[c][a.head];
    if (last_out[a.tail] == i)
      for (int cc = 0; cc < k; ++cc)
        if (outdeg[cc][a.tail] == 0) {
          --outdeg[c][a.tail];
          --indeg[c][a.head];
          return false;
        }
    if (last_in[a.head] == i)
      for (int cc = 0; cc < k; ++cc)
        if (indeg[cc][a.head] == 0) {
          --outdeg[c][a.tail];
          --indeg[c][a.head];
          return false;
        }
    return true;
  };
  auto unassign = [&](int i, int c) {
    --outdeg[c][d.arc(i).tail];
    --indeg[c][d.arc(i).head];
  };
  auto leaf = [&](const std::vector<int>& cls) {
    ArcPartition part{k, cls};
    for (int c = 0; c < k; ++c)
      if (!is_spanning_strong(d, part, c)) return;
    cb(part);
  };
  detail::enumerate_partitions(m, k, assign, unassign, leaf);
}

inline std::vector<ArcPartition> enumerate_strong_partitions(const MultiDigraph& d, int k = 2) {
  std::vector<ArcPartition> out;
  enumerate_strong_partitions(d, k, [&](const ArcPartition& p) { out.push_back(p); });
  return out;
}

struct OutImbalance {
  int value = 0;
  int vertex = 0;  // smallest vertex attaining the maximum
};

inline int class_out_degree(const MultiDigraph& d, const ArcPartition& part, int v, int which) {
  int deg = 0;
  for (int i = 0; i < d.arc_count(); ++i)
    if (part.cls[i] == which && d.arc(i).tail == v) ++deg;
  return deg;
}

// Max over vertices and class pairs of |out-degree difference|.
inline OutImbalance out_imbalance(const MultiDigraph& d, const ArcPartition& part) {
  if (static_cast<int>(part.cls.size()) != d.arc_count())
    throw std::invalid_argument("partition does not cover the arc set");
  for (int c : part.cls)
    if (c < 0 || c >= part.k) throw std::invalid_argument("partition class out of range");
  const int n = d.vertex_count();
  std::vector<std::vector<int>> outdeg(part.k, std::vector<int>(n + 1, 0));
  for (int i = 0; i < d.arc_count(); ++i) ++outdeg[part.cls[i]][d.arc(i).tail];
  OutImbalance best;
  best.vertex = n > 0 ? 1 : 0;
  for (int v = 1; v <= n; ++v)
    for (int a = 0; a < part.k; ++a)
      for (int b = a + 1; b < part.k; ++b) {
        int diff = std::abs(outdeg[a][v] - outdeg[b][v]);
        if (diff > best.value) {
          best.value = diff;
          best.vertex = v;
        }
      }
  return best;
}

}  // namespace treebal
