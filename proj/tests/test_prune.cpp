#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gmulti/prune.hpp"
#include "gmulti/rng.hpp"

using namespace gmulti;

namespace {

// Piecewise-constant 1-d sequence with huge jumps at the given points, plus
// tiny noise so all pairwise distances are distinct.
DataMatrix steps_1d(long n, const std::vector<long>& taus, double jump) {
  DataMatrix data(static_cast<std::size_t>(n), 1);
  Rng jitter(808);
  for (long i = 0; i < n; ++i) {
    double level = 0.0;
    for (const long t : taus)
      if (i >= t) level += jump;
    data(static_cast<std::size_t>(i), 0) = level + 0.01 * jitter.normal();
  }
  return data;
}

}  // namespace

TEST_SUITE_BEGIN("prune");

TEST_CASE("boundary sets bracket candidates at rounded midpoints") {
  CHECK(boundary_set({90}, 400) == std::vector<long>{0, 400});
  CHECK(boundary_set({90, 230, 320}, 400) ==
        std::vector<long>{0, 160, 275, 400});
  CHECK(boundary_set({10, 11}, 20) == std::vector<long>{0, 11, 20});
}

TEST_CASE("boundary set input validation") {
  CHECK_THROWS_AS(boundary_set({}, 50), EmptyCandidates);
  CHECK_THROWS_AS(boundary_set({0}, 50), InvalidWindow);
  CHECK_THROWS_AS(boundary_set({50}, 50), InvalidWindow);
  CHECK_THROWS_AS(boundary_set({30, 30}, 50), InvalidWindow);
  CHECK_THROWS_AS(boundary_set({30, 20}, 50), InvalidWindow);
}

TEST_CASE("penalty arithmetic") {
  const double eas = 146.94;
  const double got = ep_bic(eas, 3, 400, 2.0);
  CHECK(got == doctest::Approx(110.99121271735211));
  CHECK(ep_bic(eas, 0, 400, 2.0) == eas);
  // linear in the penalty constant
  CHECK(ep_bic(eas, 3, 400, 4.0) ==
        doctest::Approx(eas - 12.0 * std::log(400.0)));
  CHECK(pseudo_bic(eas, 3, 400) == doctest::Approx(ep_bic(eas, 3, 400, 2.0)));
}

TEST_CASE("single-candidate sums reduce to one window statistic") {
  const DataMatrix data = steps_1d(40, {20}, 8.0);
  const DistanceMatrix dist = pairwise_distances(data);
  PruneConfig cfg;

  // direct computation over the full window
  const long n = 40;
  const unsigned k = default_k(static_cast<std::size_t>(n), cfg.k_cap);
  const SimilarityGraph g = build_kmst(dist.slice(0, 39), k);
  const GraphStats stats = graph_stats(g);
  const EdgeCountProfile prof = edge_count_profile(g, {1, n});
  const NullMoments m = permutation_moments(stats, 20, n);
  const double direct =
      generalized_stat(prof.r1_at(20), prof.r2_at(20), m);

  long degenerate = 0;
  const double as = adjacent_sum(dist, {20}, cfg, &degenerate);
  const double eas = expanded_adjacent_sum(dist, {20}, cfg, &degenerate);
  CHECK(degenerate == 0);
  CHECK(std::fabs(as - direct) <= 1e-9);
  CHECK(std::fabs(eas - as) <= 1e-12);  // m = 1: expanded window is [1, n]
  CHECK(as > 10.0);  // the jump dominates
}

TEST_CASE("a fixed graph size overrides the length rule") {
  const DataMatrix data = steps_1d(40, {20}, 8.0);
  const DistanceMatrix dist = pairwise_distances(data);
  const long n = 40;

  PruneConfig cfg;
  cfg.fixed_k = 7;
  const SimilarityGraph g = build_kmst(dist.slice(0, 39), 7);
  const EdgeCountProfile prof = edge_count_profile(g, {1, n});
  const NullMoments m = permutation_moments(graph_stats(g), 20, n);
  const double direct = generalized_stat(prof.r1_at(20), prof.r2_at(20), m);
  CHECK(std::fabs(adjacent_sum(dist, {20}, cfg, nullptr) - direct) <= 1e-9);

  SUBCASE("requests larger than the window clamp to a complete union") {
    PruneConfig huge;
    huge.fixed_k = 1000;
    PruneConfig full;
    full.fixed_k = 39;  // len - 1 spanning trees exhaust the window
    CHECK(adjacent_sum(dist, {20}, huge, nullptr) ==
          adjacent_sum(dist, {20}, full, nullptr));
  }
  SUBCASE("zero keeps the default length rule") {
    PruneConfig off;
    off.fixed_k = 0;
    CHECK(adjacent_sum(dist, {20}, off, nullptr) ==
          adjacent_sum(dist, {20}, PruneConfig{}, nullptr));
  }
}

TEST_CASE("degenerate windows score zero and are counted") {
  const DataMatrix data = steps_1d(8, {4}, 5.0);
  const DistanceMatrix dist = pairwise_distances(data);
  PruneConfig cfg;

  SUBCASE("split outside the trimmed range") {
    long degenerate = 0;
    const double as = adjacent_sum(dist, {1}, cfg, &degenerate);
    CHECK(as == 0.0);
    CHECK(degenerate == 1);
  }
  SUBCASE("window shorter than four points") {
    // candidates {2,3,4}: the middle window is [3,4], length 2
    long degenerate = 0;
    adjacent_sum(dist, {2, 3, 4}, cfg, &degenerate);
    CHECK(degenerate >= 1);
  }
}

TEST_CASE("backward elimination keeps genuine shifts and drops the rest") {
  const DataMatrix data = steps_1d(120, {40, 80}, 60.0);
  const DistanceMatrix dist = pairwise_distances(data);
  PruneConfig cfg;

  SUBCASE("clean candidates survive unchanged") {
    const EliminationTrace trace = backward_eliminate(dist, {40, 80}, cfg);
    CHECK(trace.chosen_m == 2);
    CHECK(trace.selected() == std::vector<long>{40, 80});
    CHECK(trace.steps.size() == 3);
    CHECK(trace.steps[0].points.empty());
    CHECK(trace.steps[0].ep_bic == 0.0);
  }

  SUBCASE("a planted spurious point is eliminated first") {
    const EliminationTrace trace =
        backward_eliminate(dist, {40, 60, 80}, cfg);
    REQUIRE(trace.steps.size() == 4);
    CHECK(trace.steps[3].removed == 60);
    CHECK(trace.selected() == std::vector<long>{40, 80});
    // nesting: each level is the previous one minus one point
    for (std::size_t l = 1; l < trace.steps.size(); ++l) {
      const auto& small = trace.steps[l - 1].points;
      const auto& big = trace.steps[l].points;
      REQUIRE(big.size() == small.size() + 1);
      for (const long t : small)
        CHECK(std::find(big.begin(), big.end(), t) != big.end());
    }
  }
}

TEST_CASE("pure noise selects the empty model") {
  DataMatrix data(80, 3);
  Rng rng(99);
  for (std::size_t i = 0; i < 80; ++i)
    for (std::size_t j = 0; j < 3; ++j) data(i, j) = rng.normal();
  const DistanceMatrix dist = pairwise_distances(data);
  const EliminationTrace trace = backward_eliminate(dist, {27, 53}, PruneConfig{});
  CHECK(trace.chosen_m == 0);
  CHECK(trace.selected().empty());
}

TEST_CASE("empty candidate list yields the trivial trace") {
  const DataMatrix data = steps_1d(30, {}, 0.0);
  const DistanceMatrix dist = pairwise_distances(data);
  const EliminationTrace trace =
      backward_eliminate(dist, std::vector<long>{}, PruneConfig{});
  CHECK(trace.chosen_m == 0);
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].points.empty());
  CHECK(trace.selected().empty());
}

TEST_CASE("greedy never beats the all-subsets maximum here") {
  const DataMatrix data = steps_1d(100, {33, 66}, 40.0);
  const DistanceMatrix dist = pairwise_distances(data);
  PruneConfig cfg;
  const std::vector<long> cands{31, 33, 66, 90};
  const EliminationTrace trace = backward_eliminate(dist, cands, cfg);

  double best = 0.0;  // empty subset
  const std::size_t m = cands.size();
  for (std::size_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<long> subset;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(cands[i]);
    const double eas = expanded_adjacent_sum(dist, subset, cfg, nullptr);
    best = std::max(best, ep_bic(eas, static_cast<long>(subset.size()), 100,
                                 cfg.penalty_c));
  }
  CHECK(trace.steps[static_cast<std::size_t>(trace.chosen_m)].ep_bic <=
        best + 1e-9);
}

TEST_SUITE_END();
