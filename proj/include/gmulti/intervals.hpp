#pragma once

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "gmulti/errors.hpp"
#include "gmulti/numeric.hpp"
#include "gmulti/rng.hpp"

namespace gmulti {

// 1-based inclusive observation interval.
struct Interval {
  long start = 0;
  long end = 0;

  long length() const { return end - start + 1; }
  friend bool operator==(Interval x, Interval y) {
    return x.start == y.start && x.end == y.end;
  }
};

// Candidate intervals for one search step. Small windows get every admissible
// interval (enumerated by ascending start, then ascending end); larger ones
// get the window itself at index 0 plus L uniform draws, rejection-sampled
// from the pairs of endpoints until the length clears min_len.
inline std::vector<Interval> sample_intervals(long a, long b, long L, long min_len,
                                              Rng& rng) {
  const long len = b - a + 1;
  if (len < min_len) return {};
  const long span = len - min_len;  // = b - a - min_len + 1
  const long exhaustive_count = (span + 1) * (span + 2) / 2;
  std::vector<Interval> out;
  if (L >= exhaustive_count) {
    out.reserve(static_cast<std::size_t>(exhaustive_count));
    for (long lo = a; lo + min_len - 1 <= b; ++lo)
      for (long hi = lo + min_len - 1; hi <= b; ++hi) out.push_back({lo, hi});
    return out;
  }
  out.reserve(static_cast<std::size_t>(L) + 1);
  out.push_back({a, b});
  while (static_cast<long>(out.size()) < L + 1) {
    const long lo = a + static_cast<long>(rng.below(static_cast<std::uint64_t>(len)));
    const long hi = a + static_cast<long>(rng.below(static_cast<std::uint64_t>(len)));
    if (hi - lo + 1 >= min_len) out.push_back({lo, hi});
  }
  return out;
}

// Deterministic multiscale interval system: K layers of geometrically
// shrinking, evenly overlapping intervals. Layer lengths are n·gamma^(k-1);
// real-valued endpoints [lo, hi] map to observations {lo+1, ..., hi}, clipped
// to [1, n]. Intervals shorter than min_len after rounding are dropped, as are
// duplicates.
inline std::vector<Interval> seeded_intervals(long n, double gamma, long min_len) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in (0, 1)");
  if (min_len < 2) throw ConfigError("min_len must be >= 2");
  if (n < 2) return {};
  const double ratio = (static_cast<double>(min_len) - 1.0) / static_cast<double>(n);
  if (ratio >= 1.0) return {};
  const int layers = static_cast<int>(
      detail::guarded_floor(std::log(ratio) / std::log(gamma) + 1.0));
  std::vector<Interval> out;
  std::set<std::pair<long, long>> seen;
  double glen = 1.0;  // gamma^(k-1), accumulated multiplicatively
  for (int k = 1; k <= layers; ++k, glen *= gamma) {
    const long count = 2 * static_cast<long>(detail::guarded_ceil(1.0 / glen)) - 1;
    const double step =
        count > 1 ? n * (1.0 - glen) / static_cast<double>(count - 1) : 0.0;
    const double width = n * glen;
    for (long j = 1; j <= count; ++j) {
      const double lo = static_cast<double>(j - 1) * step;
      long start = static_cast<long>(detail::guarded_floor(lo)) + 1;
      long end = static_cast<long>(detail::guarded_ceil(lo + width));
      if (start < 1) start = 1;
      if (end > n) end = n;
      if (end - start + 1 < min_len) continue;
      if (seen.insert({start, end}).second) out.push_back({start, end});
    }
  }
  return out;
}

}  // namespace gmulti
