// Acceptance gate: exercises every advertised guarantee end to end and prints
// exactly one [PASS]/[FAIL] line per criterion. Exit code = number of
// failures. Tolerances and budgets are pinned here, in code.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "treebal/balancer.hpp"
#include "treebal/decomposition.hpp"
#include "treebal/digraph_families.hpp"
#include "treebal/generators.hpp"
#include "treebal/hardness.hpp"
#include "treebal/oracle.hpp"
#include "treebal/packing.hpp"

using namespace treebal;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kBalanceBound = 4;       // guaranteed imbalance bound
constexpr double kBudget1 = 60.0;      // seconds, criterion 1
constexpr double kBudget2 = 60.0;      // seconds, criterion 2
constexpr double kBudgetArb = 5.0;     // seconds per size, criterion 6
constexpr double kBudgetStrong = 30.0; // seconds per size, criterion 7
constexpr double kBudget8 = 600.0;     // seconds, criterion 8

int failures = 0;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void verdict(int idx, const std::string& what, bool ok, double secs,
             const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", idx, what.c_str(),
              secs, detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// --- criterion 1: 500 random double trees, n in [3, 200] ---
void criterion1() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  int worst = 0;
  for (std::uint64_t seed = 1; seed <= 500 && ok; ++seed) {
    Rng rng(seed * 977);
    int n = 3 + static_cast<int>(rng.below(198));  // 3..200
    auto g = random_double_tree(n, seed);
    auto sd = fixtures::construction_split(n);
    try {
      auto res = balance(g, sd, kBalanceBound);
      auto rep = validate_split_decomposition(g, res.split);
      auto imb = imbalance(g, res.split.colour);
      worst = std::max(worst, imb.max_diff);
      if (!rep.ok || imb.max_diff > kBalanceBound) {
        ok = false;
        detail = "seed " + std::to_string(seed) + ": " +
                 (rep.ok ? "imbalance " + std::to_string(imb.max_diff) : rep.detail);
      }
    } catch (const std::exception& ex) {
      ok = false;
      detail = "seed " + std::to_string(seed) + ": " + ex.what();
    }
  }
  double t = secs_since(t0);
  if (ok && t >= kBudget1) {
    ok = false;
    detail = "over time budget";
  }
  if (ok) detail = "worst imbalance " + std::to_string(worst);
  verdict(1, "500 random double trees (n <= 200) balance within 4", ok, t, detail);
}

// --- criterion 2: 200 random graphs with leftover edges ---
void criterion2() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
    Rng rng(seed * 131 + 7);
    int n = 4 + static_cast<int>(rng.below(117));  // 4..120
    int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n / 4 + 1)));
    auto g = random_double_tree_plus(n, extra, seed);
    try {
      auto packed = pack_double_tree(g);
      if (!packed.feasible) {
        ok = false;
        detail = "seed " + std::to_string(seed) + ": pack infeasible";
        break;
      }
      auto res = balance(g, packed.split, kBalanceBound);
      auto rep = validate_split_decomposition(g, res.split);
      auto imb = imbalance(g, res.split.colour);
      if (!rep.ok || imb.max_diff > kBalanceBound || res.split.m_count() != extra) {
        ok = false;
        detail = "seed " + std::to_string(seed);
      }
    } catch (const std::exception& ex) {
      ok = false;
      detail = "seed " + std::to_string(seed) + ": " + ex.what();
    }
  }
  double t = secs_since(t0);
  if (ok && t >= kBudget2) {
    ok = false;
    detail = "over time budget";
  }
  verdict(2, "200 random graphs with leftover edges balance within 4", ok, t, detail);
}

// --- criterion 3: exact optimum never beaten on the small corpus ---
void criterion3() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  auto corpus = fixtures::double_tree_corpus();  // exhaustive n <= 5 + samples
  if (corpus.size() < 200) {
    ok = false;
    detail = "corpus too small";
  }
  long long checked = 0;
  for (const auto& entry : corpus) {
    if (!ok) break;
    try {
      auto best = min_imbalance(entry.graph);
      if (!best || *best > kBalanceBound) {
        ok = false;
        detail = "oracle bound violated on a corpus entry";
        break;
      }
      auto res = balance(entry.graph, entry.split, kBalanceBound);
      auto imb = imbalance(entry.graph, res.split.colour);
      if (imb.max_diff > kBalanceBound || *best > imb.max_diff) {
        ok = false;
        detail = "balancer result inconsistent with the oracle optimum";
        break;
      }
      ++checked;
    } catch (const std::exception& ex) {
      ok = false;
      detail = ex.what();
    }
  }
  if (ok) detail = std::to_string(checked) + " instances";
  verdict(3, "corpus: exact optimum <= 4 and <= balancer result", ok, secs_since(t0), detail);
}

// --- criterion 4: the pendant-triangle instance is pinned ---
void criterion4() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  try {
    auto g = fixtures::pendant_triangle();
    auto best = min_imbalance(g);
    SplitDecomposition sd;
    sd.colour = {1, 2, 1, 1, 2, 1, 2, 2};
    sd.in_m.assign(8, 0);
    auto res = balance(g, sd, kBalanceBound);
    auto imb = imbalance(g, res.split.colour);
    ok = best.has_value() && *best == 2 && imb.max_diff >= 2 && imb.max_diff <= kBalanceBound;
    detail = "optimum " + std::to_string(best ? *best : -1) + ", balancer " +
             std::to_string(imb.max_diff);
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  verdict(4, "pendant-triangle optimum is exactly 2, balancer lands in [2,4]", ok,
          secs_since(t0), detail);
}

// --- criterion 5: discharging audit + completeness probes ---
void criterion5() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  try {
    auto corpus = fixtures::double_tree_corpus(4, 8, 10);
    for (const auto& entry : corpus) {
      auto audit = charge_audit(entry.graph, entry.split);
      int n = entry.graph.vertex_count();
      long long sum = 0;
      for (int v = 1; v <= n; ++v) sum += audit.g6[v];
      if (audit.total6 != 6LL * (4 * n - 4) || sum != audit.total6) {
        ok = false;
        detail = "charge conservation failed on a corpus entry";
        break;
      }
    }
    for (std::uint64_t seed = 1; ok && seed <= 5000; ++seed) {
      int n = 3 + static_cast<int>(seed % 58);  // 3..60
      auto g = random_double_tree(n, seed ^ 0xabcdef);
      BalancerState s(g, fixtures::construction_split(n), 4);
      auto probe = completeness_probe(s);
      if (!probe.ok) {
        ok = false;
        detail = "initial probe failed: " + probe.detail;
      }
    }
    for (std::uint64_t seed = 1; ok && seed <= 100; ++seed) {
      int n = 5 + static_cast<int>(seed % 36);
      auto g = random_double_tree(n, seed * 7919);
      std::string bad;
      StepHook hook = [&](const BalancerState& s, const TraceRecord&) {
        if (bad.empty()) {
          auto probe = completeness_probe(s);
          if (!probe.ok) bad = probe.detail;
        }
      };
      balance(g, fixtures::construction_split(n), 4, nullptr, hook);
      if (!bad.empty()) {
        ok = false;
        detail = "per-step probe failed: " + bad;
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  verdict(5, "charge audit conserves 4n-4; completeness probes stay green", ok, secs_since(t0),
          detail);
}

// --- criterion 6: arborescence family certificates ---
void criterion6() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (int n = 2; n <= 7 && ok; ++n) {
    auto tn = Clock::now();
    try {
      auto d = gen_arborescence_family(n);
      auto parts = enumerate_arborescence_partitions(d, 1);
      bool unique = parts.size() == 1;
      bool value_ok = false, attained = false;
      if (unique) {
        auto imb = out_imbalance(d, parts[0]);
        value_ok = imb.value == n - 2;
        int dvn = std::abs(class_out_degree(d, parts[0], n, 0) -
                           class_out_degree(d, parts[0], n, 1));
        attained = dvn == n - 2 && (n < 4 || imb.vertex == n);
      }
      double tsec = secs_since(tn);
      if (!unique || !value_ok || !attained || tsec >= kBudgetArb) {
        ok = false;
        detail = "n = " + std::to_string(n) +
                 (unique ? "" : ": not unique") + (value_ok ? "" : ": wrong value") +
                 (tsec >= kBudgetArb ? ": over budget" : "");
      }
    } catch (const std::exception& ex) {
      ok = false;
      detail = ex.what();
    }
  }
  verdict(6, "arborescence family: unique partition, imbalance n-2 at the sink", ok,
          secs_since(t0), detail);
}

// --- criterion 7: strongly connected family certificates ---
void criterion7() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (int n = 1; n <= 5 && ok; ++n) {
    auto tn = Clock::now();
    try {
      auto d = gen_strong_family(n);
      auto parts = enumerate_strong_partitions(d);
      bool unique = parts.size() == 1;
      bool value_ok = false;
      if (unique) {
        auto imb = out_imbalance(d, parts[0]);
        value_ok = imb.value == n - 1 && (n < 2 || imb.vertex == 2);
      }
      double tsec = secs_since(tn);
      if (!unique || !value_ok || tsec >= kBudgetStrong) {
        ok = false;
        detail = "n = " + std::to_string(n);
      }
    } catch (const std::exception& ex) {
      ok = false;
      detail = ex.what();
    }
  }
  verdict(7, "strong family: unique partition, imbalance n-1 at t", ok, secs_since(t0), detail);
}

// --- criterion 8: hardness reduction agrees with the direct search ---
void criterion8() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  int jobs = static_cast<int>(std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
  std::vector<MultiGraph> cases;
  cases.push_back(fixtures::k5());
  cases.push_back(fixtures::circulant_12(7));
  cases.push_back(fixtures::circulant_12(9));
  cases.push_back(fixtures::bridged_gadget());
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    cases.push_back(random_regular_graph(seed % 2 ? 8 : 10, 4, seed));
  int yes = 0, no = 0;
  for (size_t i = 0; i < cases.size() && ok; ++i) {
    const auto& g = cases[i];
    try {
      auto direct = ham_cycle_pair(g);
      auto reduced = decide_via_reduction(g, jobs);
      if (direct.has_value() != reduced.yes) {
        ok = false;
        detail = "case " + std::to_string(i) + ": decisions disagree";
        break;
      }
      if (reduced.yes) {
        ++yes;
        auto split = split_vertex(g, reduced.pairing);
        if (imbalance(split, reduced.witness.colour).max_diff != 0 ||
            !validate_double_tree_decomposition(split, reduced.witness.colour).ok) {
          ok = false;
          detail = "case " + std::to_string(i) + ": witness not perfectly balanced";
          break;
        }
        auto pair = map_witness(g, split, reduced.witness);  // validates both cycles
        if (static_cast<int>(pair.cycle1.size() + pair.cycle2.size()) != g.edge_count()) {
          ok = false;
          detail = "case " + std::to_string(i) + ": cycles do not cover the edge set";
        }
      } else {
        ++no;
      }
    } catch (const std::exception& ex) {
      ok = false;
      detail = "case " + std::to_string(i) + ": " + ex.what();
    }
  }
  double t = secs_since(t0);
  if (ok && t >= kBudget8) {
    ok = false;
    detail = "over time budget";
  }
  if (ok) detail = std::to_string(yes) + " yes / " + std::to_string(no) + " no";
  verdict(8, "4-regular corpus: reduction decision == direct cycle search", ok, t, detail);
}

// --- criterion 9: property suites ---
void criterion9() {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  try {
    // (a) 10^4 random swaps keep both classes spanning trees; a swap at a
    // class leaf stays incident to that leaf; parity of the per-vertex
    // difference matches the degree parity throughout.
    Rng pick(20240815);
    int swaps = 0;
    for (std::uint64_t seed = 1; ok && swaps < 10000; ++seed) {
      int n = 3 + static_cast<int>(seed % 28);
      auto g = random_double_tree(n, seed * 3 + 1);
      BalancerState s(g, fixtures::construction_split(n), 4);
      for (int t = 0; t < 50 && swaps < 10000; ++t, ++swaps) {
        int pos = static_cast<int>(pick.below(static_cast<std::uint64_t>(g.edge_count())));
        int col = s.edges[pos].colour;
        int eu = s.edges[pos].u, ev = s.edges[pos].v;
        bool leaf_u = s.colour_degree(eu, col) == 1;
        bool leaf_v = s.colour_degree(ev, col) == 1;
        int partner = perform_swap(s, pos);
        const auto& pe = s.edges[partner];
        if ((leaf_u && pe.u != eu && pe.v != eu) || (leaf_v && pe.u != ev && pe.v != ev)) {
          ok = false;
          detail = "leaf preservation violated";
          break;
        }
      }
      if (ok && !s.validate_structure().ok) {
        ok = false;
        detail = "swap broke a spanning tree";
      }
      for (int v = 1; ok && v <= n; ++v)
        if (s.diff(v) % 2 != s.degree(v) % 2) {
          ok = false;
          detail = "parity invariant violated";
        }
    }
    // (b) measure monotonicity and trace round-trip on balancer runs
    for (std::uint64_t seed = 1; ok && seed <= 50; ++seed) {
      int n = 4 + static_cast<int>(seed % 40);
      auto g = random_double_tree(n, seed * 13);
      auto res = balance(g, fixtures::construction_split(n), kBalanceBound);
      for (size_t i = 0; ok && i < res.trace.size(); ++i) {
        const auto& r = res.trace[i];
        if (!(r.measure_after < r.measure_before) ||
            (i + 1 < res.trace.size() && res.trace[i + 1].measure_before != r.measure_after)) {
          ok = false;
          detail = "measure not strictly decreasing";
        }
      }
      std::ostringstream os;
      dump_trace(res.trace, os);
      size_t lines = 0;
      for (char ch : os.str())
        if (ch == '\n') ++lines;
      if (ok && lines != 2 * res.trace.size()) {
        ok = false;
        detail = "trace dump incomplete";
      }
    }
    // (c) packer certificates on 500 random graphs, both outcomes verified
    int feas = 0, infeas = 0;
    for (std::uint64_t seed = 1; ok && seed <= 500; ++seed) {
      Rng rng(seed + 55);
      int n = 3 + static_cast<int>(rng.below(40));
      MultiGraph g(n);
      for (auto [u, v] : random_tree_edges(n, rng)) g.add_edge(u, v);
      int additions = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
      for (int i = 0; i < additions; ++i) {
        int u = rng.range(1, n), v = rng.range(1, n - 1);
        if (v >= u) ++v;
        g.add_edge(u, v);
      }
      auto r = pack_double_tree(g);
      if (r.feasible) {
        ++feas;
        if (!validate_split_decomposition(g, r.split).ok) {
          ok = false;
          detail = "pack returned an invalid split";
        }
      } else {
        ++infeas;
        if (!verify_infeasibility_witness(g, r.witness).ok) {
          ok = false;
          detail = "pack returned an invalid witness";
        }
      }
    }
    if (ok && (feas == 0 || infeas == 0)) {
      ok = false;
      detail = "packer corpus did not cover both outcomes";
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  verdict(9, "property suites: swaps, measures, traces, packer certificates", ok,
          secs_since(t0), detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
