// Exact brute-force oracles, used as ground truth in tests:
//   - enumeration of all decompositions of a double tree into two spanning trees
//   - minimum achievable imbalance over those decompositions
//   - the perfectly-balanced (imbalance 0) decision
//   - a pair of edge-disjoint Hamiltonian cycles
//
// All searches iterate edges in edge-id order and pin the first edge's colour
// to 1 (every decomposition is counted once, not twice per colour swap).
// Guarded by explicit size bounds; these are exponential searches by design.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "treebal/decomposition.hpp"
#include "treebal/graph.hpp"
#include "treebal/union_find.hpp"

namespace treebal {

inline constexpr int kMaxEnumVertices = 20;  // decomposition searches
inline constexpr int kMaxHamVertices = 14;   // Hamiltonian pair search

namespace detail {

// Backtracking over two-colourings whose classes are forests of size <= n-1.
// A complete assignment therefore has two spanning trees.
class DtSearch {
 public:
  // floor: value at which the search may stop early (parity lower bound or 0).
  // best_cap: only decompositions with imbalance < best_cap are explored when
  // pruning is on.
  DtSearch(const MultiGraph& g, bool prune_imbalance, int best_cap, int floor,
           std::atomic<int>* shared_best)
      : g_(g),
        n_(g.vertex_count()),
        m_(g.edge_count()),
        uf1_(n_ + 1),
        uf2_(n_ + 1),
        prune_(prune_imbalance),
        best_(best_cap),
        floor_(floor),
        shared_best_(shared_best) {
    colour_.assign(m_, 0);
    d1_.assign(n_ + 1, 0);
    d2_.assign(n_ + 1, 0);
    rem_ = g.degrees();
  }

  // cb returns false to abort the whole search.
  using Callback = std::function<bool(const std::vector<int>&, int max_diff)>;

  // Runs the search from edge position `from` (earlier positions must already
  // be placed via place()). Returns false if aborted.
  bool run(int from, const Callback& cb) {
    cb_ = &cb;
    return rec(from);
  }

  bool place(int i, int c) {
    int& cnt = c == 1 ? cnt1_ : cnt2_;
    UndoableUnionFind& uf = c == 1 ? uf1_ : uf2_;
    if (cnt == n_ - 1) return false;
    const Edge& e = g_.edge(i);
    if (!uf.unite(e.u, e.v)) {
      uf.undo();
      return false;
    }
    ++cnt;
    colour_[i] = c;
    bump(e, c, +1);
    return true;
  }

  void unplace(int i, int c) {
    (c == 1 ? uf1_ : uf2_).undo();
    --(c == 1 ? cnt1_ : cnt2_);
    const Edge& e = g_.edge(i);
    bump(e, c, -1);
    colour_[i] = 0;
  }

  // Lower bound on the final imbalance of v given the current partial colouring.
  int vertex_bound(int v) const {
    int lb = std::abs(d1_[v] - d2_[v]) - rem_[v];
    int parity = (d1_[v] + d2_[v] + rem_[v]) & 1;
    return std::max(lb, parity);
  }

  int best() const { return best_; }
  const std::vector<int>& colour() const { return colour_; }

 private:
  void bump(const Edge& e, int c, int delta) {
    auto& d = c == 1 ? d1_ : d2_;
    d[e.u] += delta;
    d[e.v] += delta;
    rem_[e.u] -= delta;
    rem_[e.v] -= delta;
  }

  int current_best() const {
    if (!shared_best_) return best_;
    return std::min(best_, shared_best_->load(std::memory_order_relaxed));
  }

  bool rec(int i) {
    if (i == m_) return report();
    const Edge& e = g_.edge(i);
    const int last = (i == 0) ? 1 : 2;  // first edge pinned to colour 1
    for (int c = 1; c <= last; ++c) {
      if (!place(i, c)) continue;
      bool viable = true;
      if (prune_) {
        int cap = current_best();
        if (vertex_bound(e.u) >= cap || vertex_bound(e.v) >= cap) viable = false;
      }
      if (viable && !rec(i + 1)) {
        unplace(i, c);
        return false;
      }
      unplace(i, c);
    }
    return true;
  }

  bool report() {
    int value = 0;
    for (int v = 1; v <= n_; ++v) value = std::max(value, std::abs(d1_[v] - d2_[v]));
    if (prune_) {
      if (value >= current_best()) return true;
      best_ = value;
      if (shared_best_) {
        int cur = shared_best_->load(std::memory_order_relaxed);
        while (value < cur &&
               !shared_best_->compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
        }
      }
    }
    if (cb_ && *cb_ && !(*cb_)(colour_, value)) return false;
    if (prune_ && best_ <= floor_) return false;
    return true;
  }

  const MultiGraph& g_;
  int n_, m_;
  UndoableUnionFind uf1_, uf2_;
  int cnt1_ = 0, cnt2_ = 0;
  std::vector<int> colour_;
  std::vector<int> d1_, d2_, rem_;
  bool prune_;
  int best_;
  int floor_;
  std::atomic<int>* shared_best_;
  const Callback* cb_ = nullptr;
};

inline void check_enum_size(const MultiGraph& g) {
  if (g.vertex_count() > kMaxEnumVertices)
    throw OversizeError("decomposition enumeration limited to " +
                        std::to_string(kMaxEnumVertices) + " vertices, got " +
                        std::to_string(g.vertex_count()));
}

inline int parity_floor(const MultiGraph& g) {
  auto degs = g.degrees();
  int f = 0;
  for (int v = 1; v <= g.vertex_count(); ++v) f = std::max(f, degs[v] & 1);
  return f;
}

}  // namespace detail

// Visits every decomposition of g into two spanning trees (first edge pinned to
// colour 1). Returns the number of decompositions visited; cb may be empty, or
// return false to stop early.
inline long long enumerate_double_tree_decompositions(
    const MultiGraph& g,
    const std::function<bool(const Decomposition&)>& cb = nullptr) {
  detail::check_enum_size(g);
  int n = g.vertex_count(), m = g.edge_count();
  if (m != 2 * (n - 1)) return 0;
  long long count = 0;
  detail::DtSearch search(g, /*prune=*/false, 0, 0, nullptr);
  detail::DtSearch::Callback hook = [&](const std::vector<int>& colour, int) {
    ++count;
    if (!cb) return true;
    Decomposition d;
    d.colour = colour;
    return cb(d);
  };
  search.run(0, hook);
  return count;
}

// Minimum imbalance over all decompositions of the double tree g, or nullopt
// if g has no decomposition into two spanning trees. jobs > 1 splits the search
// by colour prefix; the value is identical for any jobs count. If witness is
// requested it is recomputed serially, so it too is deterministic.
inline std::optional<int> min_imbalance(const MultiGraph& g, Decomposition* witness = nullptr,
                                        int jobs = 1, int stop_floor = -1) {
  detail::check_enum_size(g);
  int n = g.vertex_count(), m = g.edge_count();
  if (m != 2 * (n - 1)) return std::nullopt;
  if (n == 1) {
    if (witness) witness->colour.clear();
    return 0;
  }
  int floor = stop_floor >= 0 ? stop_floor : detail::parity_floor(g);
  const int kNoValue = m + 1;  // imbalance can never exceed max degree <= m
  std::atomic<int> shared_best(kNoValue);

  int prefix = 0;
  if (jobs > 1) {
    while ((1 << prefix) < 4 * jobs && prefix < std::min(10, m - 1)) ++prefix;
  }
  const int tasks = 1 << prefix;
  std::atomic<int> next_task(0);
  auto worker = [&] {
    for (int t = next_task.fetch_add(1); t < tasks; t = next_task.fetch_add(1)) {
      detail::DtSearch search(g, /*prune=*/true, kNoValue, floor, &shared_best);
      if (!search.place(0, 1)) continue;
      bool ok = true;
      for (int i = 1; i <= prefix && ok; ++i)
        ok = search.place(i, ((t >> (i - 1)) & 1) ? 2 : 1);
      if (!ok) continue;  // leaked placements die with this search object
      detail::DtSearch::Callback hook = [](const std::vector<int>&, int) { return true; };
      search.run(prefix + 1, hook);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  int value = shared_best.load();
  if (value == kNoValue) return std::nullopt;  // not a double tree
  if (witness) {
    // Deterministic witness: first decomposition (edge-id order search) that
    // attains the known optimum.
    detail::DtSearch search(g, /*prune=*/true, value + 1, value, nullptr);
    bool found = false;
    detail::DtSearch::Callback hook = [&](const std::vector<int>& colour, int diff) {
      if (diff != value) return true;
      witness->colour = colour;
      found = true;
      return false;
    };
    search.run(0, hook);
    if (!found) throw InvariantViolation("witness re-search missed the optimum");
  }
  return value;
}

// Perfectly-balanced decision: does g decompose into two spanning trees with
// every vertex split evenly? Requires all degrees even, by parity.
inline bool pbdt(const MultiGraph& g, Decomposition* witness = nullptr, int jobs = 1) {
  auto degs = g.degrees();
  for (int v = 1; v <= g.vertex_count(); ++v)
    if (degs[v] & 1) return false;
  auto value = min_imbalance(g, nullptr, jobs, /*stop_floor=*/0);
  if (!value || *value != 0) return false;
  if (witness) {
    auto check = min_imbalance(g, witness, 1, 0);
    (void)check;
  }
  return true;
}

struct HamPair {
  std::vector<int> cycle1;  // edge ids in cyclic order
  std::vector<int> cycle2;
};

namespace detail {

// First Hamiltonian cycle in edge-id order, skipping banned edge positions.
// Canonical form: starts at vertex 1; of the two cycle edges at vertex 1 the
// path begins with the one leading to the smaller neighbour (ties between
// parallel edges broken by edge id).
class HamSearch {
 public:
  HamSearch(const MultiGraph& g, const std::vector<std::vector<int>>& inc,
            std::vector<char>& banned)
      : g_(g), inc_(inc), banned_(banned), n_(g.vertex_count()) {}

  // cb receives edge positions of a cycle; returns false to stop.
  bool for_each_cycle(const std::function<bool(const std::vector<int>&)>& cb) {
    if (n_ < 2) return true;
    cb_ = &cb;
    used_.assign(n_ + 1, 0);
    used_[1] = 1;
    path_verts_ = {1};
    path_edges_.clear();
    return extend(1);
  }

 private:
  bool extend(int v) {
    if (static_cast<int>(path_verts_.size()) == n_) {
      for (int idx : inc_[v]) {
        if (banned_[idx]) continue;
        const Edge& e = g_.edge(idx);
        if (e.other(v) != 1) continue;
        if (!path_edges_.empty() && idx == path_edges_.front()) continue;
        int second = path_verts_.size() > 1 ? path_verts_[1] : 1;
        int last = v;
        bool canonical = second < last ||
                         (second == last && g_.edge(path_edges_.front()).id < e.id);
        if (n_ == 2) canonical = g_.edge(path_edges_.front()).id < e.id;
        if (!canonical) continue;
        path_edges_.push_back(idx);
        bool go = (*cb_)(path_edges_);
        path_edges_.pop_back();
        if (!go) return false;
      }
      return true;
    }
    for (int idx : inc_[v]) {
      if (banned_[idx]) continue;
      const Edge& e = g_.edge(idx);
      int w = e.other(v);
      if (used_[w]) continue;
      used_[w] = 1;
      path_verts_.push_back(w);
      path_edges_.push_back(idx);
      bool go = extend(w);
      path_edges_.pop_back();
      path_verts_.pop_back();
      used_[w] = 0;
      if (!go) return false;
    }
    return true;
  }

  const MultiGraph& g_;
  const std::vector<std::vector<int>>& inc_;
  std::vector<char>& banned_;
  int n_;
  std::vector<char> used_;
  std::vector<int> path_verts_;
  std::vector<int> path_edges_;
  const std::function<bool(const std::vector<int>&)>* cb_ = nullptr;
};

}  // namespace detail

// First (in search order) pair of edge-disjoint Hamiltonian cycles, or nullopt.
inline std::optional<HamPair> ham_cycle_pair(const MultiGraph& g) {
  int n = g.vertex_count();
  if (n > kMaxHamVertices)
    throw OversizeError("Hamiltonian pair search limited to " +
                        std::to_string(kMaxHamVertices) + " vertices, got " +
                        std::to_string(n));
  if (n < 2) return std::nullopt;
  auto degs = g.degrees();
  for (int v = 1; v <= n; ++v)
    if (degs[v] < 4) return std::nullopt;  // two disjoint cycles need degree 4

  auto inc = g.incidence();
  std::vector<char> banned(g.edge_count(), 0);
  std::optional<HamPair> result;

  detail::HamSearch outer(g, inc, banned);
  outer.for_each_cycle([&](const std::vector<int>& c1) {
    for (int idx : c1) banned[idx] = 1;
    detail::HamSearch inner(g, inc, banned);
    inner.for_each_cycle([&](const std::vector<int>& c2) {
      HamPair pair;
      for (int idx : c1) pair.cycle1.push_back(g.edge(idx).id);
      for (int idx : c2) pair.cycle2.push_back(g.edge(idx).id);
      result = std::move(pair);
      return false;
    });
    for (int idx : c1) banned[idx] = 0;
    return !result.has_value();
  });
  return result;
}

// Checks that the given edge ids form a Hamiltonian cycle of g.
inline bool is_hamiltonian_cycle(const MultiGraph& g, const std::vector<int>& edge_ids) {
  int n = g.vertex_count();
  if (static_cast<int>(edge_ids.size()) != n || n < 2) return false;
  std::vector<int> deg(n + 1, 0);
  UnionFind uf(n + 1);
  int merges = 0;
  for (int id : edge_ids) {
    auto idx = g.index_of(id);
    if (!idx) return false;
    const Edge& e = g.edge(*idx);
    ++deg[e.u];
    ++deg[e.v];
    if (uf.unite(e.u, e.v)) ++merges;
  }
  for (int v = 1; v <= n; ++v)
    if (deg[v] != 2) return false;
  return merges == n - 1;  // connected single cycle
}

}  // namespace treebal
