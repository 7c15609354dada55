#include <algorithm>
#include <set>

#include "doctest.h"
#include "gmulti/intervals.hpp"

using namespace gmulti;

TEST_SUITE_BEGIN("intervals");

TEST_CASE("exhaustive branch with a single admissible interval") {
  Rng rng(1);
  for (const long L : {1L, 5L, 100L}) {
    const auto ivs = sample_intervals(1, 10, L, 10, rng);
    REQUIRE(ivs.size() == 1);
    CHECK(ivs[0] == Interval{1, 10});
  }
}

TEST_CASE("exhaustive branch enumerates ascending by start then end") {
  Rng rng(1);
  const auto ivs = sample_intervals(1, 12, 100, 10, rng);
  const std::vector<Interval> expected{{1, 10}, {1, 11}, {1, 12},
                                       {2, 11}, {2, 12}, {3, 12}};
  CHECK(ivs == expected);
}

TEST_CASE("sampled branch keeps the full window at index 0") {
  Rng rng(99);
  const auto ivs = sample_intervals(1, 100, 5, 10, rng);
  REQUIRE(ivs.size() == 6);  // 5 draws + the window itself
  CHECK(ivs[0] == Interval{1, 100});
  for (const Interval iv : ivs) {
    CHECK(iv.length() >= 10);
    CHECK(iv.start >= 1);
    CHECK(iv.end <= 100);
  }
}

TEST_CASE("window shorter than min_len yields nothing") {
  Rng rng(1);
  CHECK(sample_intervals(1, 8, 50, 10, rng).empty());
}

TEST_CASE("sampling is reproducible per generator state") {
  Rng a(1234), b(1234), c(4321);
  const auto ia = sample_intervals(10, 200, 20, 10, a);
  const auto ib = sample_intervals(10, 200, 20, 10, b);
  CHECK(ia == ib);
  const auto ic = sample_intervals(10, 200, 20, 10, c);
  CHECK(ia != ic);  // astronomically unlikely to coincide
}

TEST_CASE("seeded layers for n = 40") {
  const auto ivs = seeded_intervals(40, 0.70710678118654752, 10);
  REQUIRE(!ivs.empty());
  CHECK(ivs[0] == Interval{1, 40});  // layer 1 covers everything
  // layer 2: real endpoints [0,29], [5.86,34.14]->{6..35}, [11.7,40]->{12..40}
  CHECK(ivs[1] == Interval{1, 29});
  CHECK(ivs[2] == Interval{6, 35});
  CHECK(ivs[3] == Interval{12, 40});
  std::set<std::pair<long, long>> seen;
  for (const Interval iv : ivs) {
    CHECK(iv.length() >= 10);
    CHECK(iv.start >= 1);
    CHECK(iv.end <= 40);
    CHECK(seen.insert({iv.start, iv.end}).second);  // deduplicated
  }
}

TEST_CASE("seeded layers for n = 1000") {
  const auto ivs = seeded_intervals(1000, 0.70710678118654752, 10);
  CHECK(ivs[0] == Interval{1, 1000});
  CHECK(ivs[1] == Interval{1, 708});
  CHECK(ivs[2] == Interval{147, 854});
  CHECK(ivs[3] == Interval{293, 1000});
}

TEST_CASE("seeded output is deterministic") {
  const auto a = seeded_intervals(500, 0.70710678118654752, 10);
  const auto b = seeded_intervals(500, 0.70710678118654752, 10);
  CHECK(a == b);
}

TEST_CASE("seeded validation") {
  CHECK_THROWS_AS(seeded_intervals(100, 1.0, 10), ConfigError);
  CHECK_THROWS_AS(seeded_intervals(100, 0.0, 10), ConfigError);
  CHECK_THROWS_AS(seeded_intervals(100, 0.5, 1), ConfigError);
  CHECK(seeded_intervals(5, 0.5, 10).empty());  // min_len - 1 >= n
}

TEST_SUITE_END();
