#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

#include "doctest.h"
#include "gmulti/graph.hpp"
#include "oracles.hpp"

using namespace gmulti;

namespace {

DistanceMatrix points_1d(std::initializer_list<double> xs) {
  DistanceMatrix d(xs.size());
  std::size_t i = 0;
  for (const double a : xs) {
    std::size_t j = 0;
    for (const double b : xs) {
      if (j > i) d.set(i, j, std::fabs(a - b));
      ++j;
    }
    ++i;
  }
  return d;
}

double total_weight(const std::vector<Edge>& edges, const DistanceMatrix& d) {
  double w = 0;
  for (const Edge e : edges) w += d(e.u, e.v);
  return w;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("two nodes have the only possible tree") {
  DistanceMatrix d(2);
  d.set(0, 1, 3.0);
  const SimilarityGraph g = build_kmst(d, 1);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edges()[0] == Edge{0, 1});
}

TEST_CASE("collinear points at 0,1,2,10") {
  const DistanceMatrix d = points_1d({0, 1, 2, 10});
  SUBCASE("first tree is the path") {
    const SimilarityGraph g = build_kmst(d, 1);
    REQUIRE(g.num_edges() == 3);
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    CHECK(total_weight(g.edges(), d) == 10.0);  // 1 + 1 + 8
  }
  SUBCASE("two trees exhaust the complete graph on 4 nodes") {
    const SimilarityGraph g = build_kmst(d, 2);
    REQUIRE(g.num_edges() == 6);
    CHECK(g.edges() ==
          std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  }
}

TEST_CASE("first tree matches exhaustive enumeration") {
  Rng rng(991);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(4));  // 3..6
    DistanceMatrix d(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j)
        d.set(i, j, 0.25 + rng.uniform01());
    const SimilarityGraph g = build_kmst(d, 1);
    REQUIRE(g.num_edges() == static_cast<std::size_t>(n) - 1);
    CHECK(total_weight(g.edges(), d) ==
          doctest::Approx(oracle::min_tree_weight(d)).epsilon(1e-12));
  }
}

TEST_CASE("orthogonality and edge counts of deeper unions") {
  Rng rng(17);
  DistanceMatrix d(9);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = i + 1; j < 9; ++j) d.set(i, j, rng.uniform01());
  const SimilarityGraph g1 = build_kmst(d, 1);
  const SimilarityGraph g3 = build_kmst(d, 3);
  CHECK(g1.num_edges() == 8);
  CHECK(g3.num_edges() == 24);  // k(n-1) while k <= n/2
  std::set<Edge> seen;
  for (const Edge e : g3.edges()) CHECK(seen.insert(e).second);  // no duplicates
  for (const Edge e : g1.edges()) CHECK(seen.count(e) == 1);     // nesting
}

TEST_CASE("residual disconnection yields a maximal forest and stops") {
  // K4 holds 1 full tree (3 edges) + residual 3 edges forming a tree; k = 3
  // can add nothing beyond those 6.
  const DistanceMatrix d = points_1d({0, 1, 2, 10});
  const SimilarityGraph g = build_kmst(d, 3);
  CHECK(g.num_edges() == 6);
}

TEST_CASE("relabeling equivariance") {
  // Reversing the point order relabels nodes i -> n-1-i.
  const DistanceMatrix fwd = points_1d({0, 1, 3, 7, 12});
  const DistanceMatrix rev = points_1d({12, 7, 3, 1, 0});
  const SimilarityGraph gf = build_kmst(fwd, 2);
  const SimilarityGraph gr = build_kmst(rev, 2);
  std::vector<Edge> mapped;
  for (const Edge e : gr.edges()) {
    const std::uint32_t u = 4 - e.v, v = 4 - e.u;
    mapped.push_back({u, v});
  }
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == gf.edges());
}

TEST_CASE("build_kmst validation") {
  DistanceMatrix d(2);
  d.set(0, 1, 1.0);
  CHECK_THROWS_AS(build_kmst(d, 0), ConfigError);
  CHECK_THROWS_AS(build_kmst(DistanceMatrix(1), 1), InvalidData);
}

TEST_CASE("default graph multiplicity") {
  CHECK(default_k(100, GraphStage::search) == 10);
  CHECK(default_k(1600, GraphStage::search) == 30);
  CHECK(default_k(17, GraphStage::prune) == 4);
  CHECK(default_k(100, GraphStage::prune) == 5);
  CHECK(default_k(2, GraphStage::search) == 1);
  CHECK(default_k(3, 30u) == 1);
}

TEST_CASE("graph statistics of a path") {
  const SimilarityGraph g(4, 1, {{0, 1}, {1, 2}, {2, 3}});
  const GraphStats s = graph_stats(g);
  CHECK(s.degrees == std::vector<std::uint32_t>{1, 2, 2, 1});
  CHECK(s.sum_deg_sq == 10.0);
  CHECK(s.num_edges == 3);
  CHECK(s.v_g == doctest::Approx(1.0));  // 10 - 36/4
  // one-hop neighborhoods: ends see 2 edges, inner nodes see all 3
  CHECK(s.two_hop_sq_sum == doctest::Approx(4.0 + 9.0 + 9.0 + 4.0));
}

TEST_CASE("graph statistics of a star") {
  const SimilarityGraph g(4, 1, {{0, 1}, {0, 2}, {0, 3}});
  const GraphStats s = graph_stats(g);
  CHECK(s.degrees == std::vector<std::uint32_t>{3, 1, 1, 1});
  CHECK(s.sum_deg_sq == 12.0);
  CHECK(s.v_g == doctest::Approx(12.0 - 36.0 / 4.0));
}

TEST_CASE("graph statistics of an empty graph") {
  const SimilarityGraph g(5, 1, {});
  const GraphStats s = graph_stats(g);
  CHECK(s.num_edges == 0);
  CHECK(s.sum_deg_sq == 0.0);
  CHECK(s.v_g == 0.0);
  CHECK(s.two_hop_sq_sum == 0.0);
}

TEST_CASE("degree sum identity on random graphs") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto edges = oracle::random_connected_graph(7, 0.3, rng);
    const SimilarityGraph g(7, 1, edges);
    const GraphStats s = graph_stats(g);
    std::uint64_t deg_sum = 0;
    for (const auto d : s.degrees) deg_sum += d;
    CHECK(deg_sum == 2 * s.num_edges);
    CHECK(s.sum_deg_sq * 7.0 >= 4.0 * s.num_edges * s.num_edges);  // Cauchy-Schwarz
  }
}

TEST_SUITE_END();
