#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"

using namespace bfcausal;
using testutil::make_vars;

TEST_CASE("d-separation oracle recovers every 4-node markov class") {
  for (const Graph& truth : testutil::enumerate_dags(4)) {
    const Graph got = pcmax_search_with_test(truth.variables(), testutil::dsep_test(truth), 0.5,
                                             Knowledge{}, 3);
    const Graph want = dag_to_cpdag(truth);
    INFO("truth:\n" << emit_graph(truth));
    REQUIRE(emit_graph(got) == emit_graph(want));
  }
}

TEST_CASE("chain skeleton records the separating set") {
  Graph truth(make_vars(3));
  truth.addDirected(0, 1);
  truth.addDirected(1, 2);
  auto [skel, seps] = pcmax_skeleton_with_test(truth.variables(), testutil::dsep_test(truth),
                                               Knowledge{}, 3);
  CHECK(skel.hasEdge(0, 1));
  CHECK(skel.hasEdge(1, 2));
  CHECK_FALSE(skel.hasEdge(0, 2));
  REQUIRE(seps.contains(0, 2));
  CHECK(seps.sepset(0, 2) == std::vector<int>{1});
}

TEST_CASE("collider oriented, chain left unoriented") {
  Graph collider(make_vars(3));
  collider.addDirected(0, 2);
  collider.addDirected(1, 2);
  Graph got = pcmax_search_with_test(collider.variables(), testutil::dsep_test(collider), 0.5,
                                     Knowledge{}, 3);
  CHECK(got.hasDirected(0, 2));
  CHECK(got.hasDirected(1, 2));

  Graph chain(make_vars(3));
  chain.addDirected(0, 1);
  chain.addDirected(1, 2);
  got = pcmax_search_with_test(chain.variables(), testutil::dsep_test(chain), 0.5, Knowledge{}, 3);
  CHECK(got.isUndirected(0, 1));
  CHECK(got.isUndirected(1, 2));
}

TEST_CASE("output has no bidirected edges and no directed cycles") {
  for (std::uint64_t seed : {5, 6, 7}) {
    const Graph truth = random_dag(6, 8, seed);
    const Graph got = pcmax_search_with_test(truth.variables(), testutil::dsep_test(truth), 0.5,
                                             Knowledge{}, 4);
    for (const Edge& e : got.edges())
      CHECK_FALSE((e.markA == Mark::Arrow && e.markB == Mark::Arrow));
    // Directed part must be acyclic: no arrow whose head reaches back to its
    // tail along directed edges.
    for (const Edge& e : got.edges()) {
      if (got.hasDirected(e.a, e.b)) CHECK_FALSE(has_directed_path(got, e.b, e.a));
      if (got.hasDirected(e.b, e.a)) CHECK_FALSE(has_directed_path(got, e.a, e.b));
    }
  }
}

TEST_CASE("larger alpha can only remove adjacencies") {
  const int n = 700;
  DataTable t;
  t.variables = make_vars(4);
  t.columns.assign(4, std::vector<double>(n));
  Rng rng(21);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = 0.8 * a + 0.4 * rng.normal();
    t.columns[0][i] = a;
    t.columns[1][i] = b;
    t.columns[2][i] = 0.5 * b + 0.6 * rng.normal();
    t.columns[3][i] = rng.uniform(-1.0, 1.0);
  }
  const EmbeddedData e = testutil::embed_for_test(t, 3);

  auto adjacencies = [](const Graph& g) {
    std::set<std::pair<int, int>> out;
    for (const Edge& edge : g.edges()) out.insert({edge.a, edge.b});
    return out;
  };

  TestConfig lo, hi;
  lo.alpha = 0.001;
  hi.alpha = 0.2;
  const auto adjLo = adjacencies(pcmax_search(e, lo, Knowledge{}, 3));
  const auto adjHi = adjacencies(pcmax_search(e, hi, Knowledge{}, 3));
  for (const auto& p : adjHi) CHECK(adjLo.count(p) == 1);
}

TEST_CASE("depth zero only runs marginal tests") {
  // X1 -> X2 -> X3: removing X1--X3 needs conditioning on X2, so at depth 0
  // the edge survives.
  Graph truth(make_vars(3));
  truth.addDirected(0, 1);
  truth.addDirected(1, 2);
  auto [skel, seps] = pcmax_skeleton_with_test(truth.variables(), testutil::dsep_test(truth),
                                               Knowledge{}, 0);
  CHECK(skel.hasEdge(0, 2));

  CHECK_THROWS_AS(pcmax_skeleton_with_test(truth.variables(), testutil::dsep_test(truth),
                                           Knowledge{}, -1),
                  InvalidConfigError);
}

TEST_CASE("every removed edge has a recorded witness that separates") {
  for (std::uint64_t seed : {31, 32}) {
    const Graph truth = random_dag(5, 6, seed);
    auto [skel, seps] = pcmax_skeleton_with_test(truth.variables(), testutil::dsep_test(truth),
                                                 Knowledge{}, 4);
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b) {
        if (skel.hasEdge(a, b)) continue;
        REQUIRE(seps.contains(a, b));
        CHECK(d_separated(truth, a, b, seps.sepset(a, b)));
      }
  }
}

TEST_CASE("required edges survive the skeleton and get their direction") {
  // Truth says X1 and X3 are independent, but knowledge requires the edge.
  Graph truth(make_vars(3));
  truth.addDirected(0, 1);
  truth.addDirected(1, 2);
  Knowledge know;
  know.require(0, 2);
  const Graph got = pcmax_search_with_test(truth.variables(), testutil::dsep_test(truth), 0.5,
                                           know, 3);
  CHECK(got.hasDirected(0, 2));
}

TEST_CASE("forbidden colliders are skipped") {
  Graph truth(make_vars(3));
  truth.addDirected(0, 2);
  truth.addDirected(1, 2);
  Knowledge know;
  know.forbid(0, 2);
  const Graph got = pcmax_search_with_test(truth.variables(), testutil::dsep_test(truth), 0.5,
                                           know, 3);
  CHECK_FALSE(got.hasDirected(0, 2));
  CHECK(got.hasEdge(0, 2));
}

TEST_CASE("data-driven collider on a v-structure") {
  const int n = 2000;
  DataTable t;
  t.variables = make_vars(3);
  t.columns.assign(3, std::vector<double>(n));
  Rng rng(77);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = rng.uniform(-1.0, 1.0);
    t.columns[0][i] = x;
    t.columns[1][i] = y;
    t.columns[2][i] = x + y + 0.3 * rng.normal();
  }
  const EmbeddedData e = testutil::embed_for_test(t, 3);
  TestConfig cfg;
  cfg.alpha = 0.01;
  const Graph g = pcmax_search(e, cfg, Knowledge{}, 3);
  CHECK(g.hasDirected(0, 2));
  CHECK(g.hasDirected(1, 2));
  CHECK_FALSE(g.hasEdge(0, 1));
}
