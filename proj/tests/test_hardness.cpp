#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "treebal/generators.hpp"
#include "treebal/hardness.hpp"
#include "treebal/oracle.hpp"

using namespace treebal;

TEST_CASE("vertex split geometry on K5", "[hardness]") {
  auto g = fixtures::k5();
  REQUIRE(is_regular(g, 4));
  // pivot 1 has incident edges (1,2),(1,3),(1,4),(1,5) in slot order.
  auto split = split_vertex(g, 0);  // slot 0 pairs with slot 1: x keeps 2 and 3
  CHECK(split.vertex_count() == 6);
  CHECK(split.edge_count() == 10);
  auto deg = split.degrees();
  CHECK(deg[1] == 2);  // x, reusing the pivot's number
  CHECK(deg[6] == 2);  // y = n + 1
  for (int v = 2; v <= 5; ++v) CHECK(deg[v] == 4);
  // edge ids are preserved positionally
  for (int i = 0; i < 10; ++i) CHECK(split.edge(i).id == g.edge(i).id);
  std::multiset<int> x_nbrs, y_nbrs;
  for (int i = 0; i < split.edge_count(); ++i) {
    const Edge& e = split.edge(i);
    if (e.u == 1 || e.v == 1) x_nbrs.insert(e.u == 1 ? e.v : e.u);
    if (e.u == 6 || e.v == 6) y_nbrs.insert(e.u == 6 ? e.v : e.u);
  }
  CHECK(x_nbrs == std::multiset<int>{2, 3});
  CHECK(y_nbrs == std::multiset<int>{4, 5});

  auto split2 = split_vertex(g, 2);  // slot 0 pairs with slot 3: x keeps 2 and 5
  std::multiset<int> x2;
  for (int i = 0; i < split2.edge_count(); ++i) {
    const Edge& e = split2.edge(i);
    if (e.u == 1 || e.v == 1) x2.insert(e.u == 1 ? e.v : e.u);
  }
  CHECK(x2 == std::multiset<int>{2, 5});

  CHECK_THROWS_AS(split_vertex(g, 3), std::invalid_argument);
  CHECK_THROWS_AS(split_vertex(g, -1), std::invalid_argument);
}

TEST_CASE("reduction decision matches the direct cycle search", "[hardness]") {
  struct Case {
    const char* name;
    MultiGraph g;
  };
  std::vector<Case> cases;
  cases.push_back({"K5", fixtures::k5()});
  cases.push_back({"C7(1,2)", fixtures::circulant_12(7)});
  cases.push_back({"C9(1,2)", fixtures::circulant_12(9)});
  cases.push_back({"bridged", fixtures::bridged_gadget()});
  for (std::uint64_t seed : {5ull, 11ull, 23ull})
    cases.push_back({"random8", random_regular_graph(8, 4, seed)});

  for (auto& c : cases) {
    INFO(c.name);
    auto direct = ham_cycle_pair(c.g);
    auto reduced = decide_via_reduction(c.g, 2);
    REQUIRE(direct.has_value() == reduced.yes);
    if (reduced.yes) {
      REQUIRE(reduced.pairing >= 0);
      auto split = split_vertex(c.g, reduced.pairing);
      // the witness must be a perfectly balanced double-tree decomposition
      REQUIRE(validate_double_tree_decomposition(split, reduced.witness.colour).ok);
      CHECK(imbalance(split, reduced.witness.colour).max_diff == 0);
      // and it must map back to two edge-disjoint Hamiltonian cycles
      auto pair = map_witness(c.g, split, reduced.witness);
      std::set<int> ids(pair.cycle1.begin(), pair.cycle1.end());
      ids.insert(pair.cycle2.begin(), pair.cycle2.end());
      CHECK(static_cast<int>(ids.size()) == c.g.edge_count());
      CHECK(pair.cycle1.size() == static_cast<size_t>(c.g.vertex_count()));
      CHECK(pair.cycle2.size() == static_cast<size_t>(c.g.vertex_count()));
      auto order1 = cycle_vertex_order(c.g, pair.cycle1);
      auto order2 = cycle_vertex_order(c.g, pair.cycle2);
      CHECK(order1.size() == static_cast<size_t>(c.g.vertex_count()));
      CHECK(order2.size() == static_cast<size_t>(c.g.vertex_count()));
    }
  }
}

TEST_CASE("bridged gadget is a certified no", "[hardness]") {
  auto g = fixtures::bridged_gadget();
  REQUIRE(is_regular(g, 4));
  auto d = decide_via_reduction(g);
  CHECK_FALSE(d.yes);
  CHECK(d.pairing == -1);
}

TEST_CASE("reduction rejects non-4-regular inputs", "[hardness]") {
  CHECK_THROWS_AS(decide_via_reduction(fixtures::k4()), std::invalid_argument);
  CHECK_THROWS_AS(decide_via_reduction(fixtures::petersen()), std::invalid_argument);
  CHECK_FALSE(is_regular(fixtures::petersen(), 4));
  CHECK(is_regular(fixtures::petersen(), 3));
}

TEST_CASE("cycle vertex order validates its input", "[hardness]") {
  auto g = fixtures::k5();
  // 1-2-3-4-5-1 as edge ids: (1,2)=1,(2,3)=5,(3,4)=8,(4,5)=10,(1,5)=4
  auto order = cycle_vertex_order(g, {1, 5, 8, 10, 4});
  REQUIRE(order.size() == 5);
  CHECK(order[0] == 1);
  CHECK((order[1] == 2 || order[1] == 5));
  CHECK_THROWS(cycle_vertex_order(g, {1, 5, 8}));        // too short
  CHECK_THROWS(cycle_vertex_order(g, {1, 2, 3, 6, 9}));  // not a single cycle
  CHECK_THROWS_AS(cycle_vertex_order(g, {1, 5, 8, 10, 99}), std::invalid_argument);
}

TEST_CASE("map_witness rejects a non-cycle witness", "[hardness]") {
  auto g = fixtures::k5();
  auto split = split_vertex(g, 0);
  Decomposition bogus;
  bogus.colour.assign(split.edge_count(), 1);
  bogus.colour[0] = 2;
  CHECK_THROWS(map_witness(g, split, bogus));
  Decomposition wrong_size;
  wrong_size.colour.assign(3, 1);
  CHECK_THROWS_AS(map_witness(g, split, wrong_size), std::invalid_argument);
}
