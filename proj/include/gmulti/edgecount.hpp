#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "gmulti/errors.hpp"
#include "gmulti/graph.hpp"
#include "gmulti/numeric.hpp"
#include "gmulti/parallel.hpp"
#include "gmulti/rng.hpp"

namespace gmulti {

inline constexpr double kDefaultTrim = 0.1;
inline constexpr long kDefaultPermutations = 999;

// Eigenvalues below this (relative to max(1, trace)) are treated as zero when
// inverting a split covariance.
inline constexpr double kSingularRelTol = 1e-12;

// 1-based inclusive observation window.
struct Window {
  long a = 0;
  long b = 0;

  long length() const { return b - a + 1; }
  friend bool operator==(Window x, Window y) { return x.a == y.a && x.b == y.b; }
};

// Trimmed scan endpoints: candidate splits t run over [scan_left, scan_right].
inline long scan_left(Window w, double trim = kDefaultTrim) {
  return static_cast<long>(detail::guarded_ceil(w.a + trim * w.length()));
}
inline long scan_right(Window w, double trim = kDefaultTrim) {
  return static_cast<long>(detail::guarded_floor(w.b - trim * w.length()));
}

// Edge counts on the two sides of every split of a window: r1 counts edges
// entirely within the first u observations, r2 those entirely within the rest.
// Stored by u = t − a + 1 ∈ [0, length].
struct EdgeCountProfile {
  Window window;
  std::vector<long> r1, r2;

  long r1_at(long t) const { return r1[static_cast<std::size_t>(t - window.a + 1)]; }
  long r2_at(long t) const { return r2[static_cast<std::size_t>(t - window.a + 1)]; }
};

namespace detail {

// Counting-sort profile: one pass over the edges, one prefix/suffix sweep.
// pos[node] is the 1-based position of the node in the (possibly permuted)
// window ordering. Output vectors are sized n+1 and indexed by u.
inline void profile_from_positions(const std::vector<Edge>& edges,
                                   std::span<const std::uint32_t> pos, long n,
                                   std::vector<long>& r1, std::vector<long>& r2,
                                   std::vector<long>& cnt_hi, std::vector<long>& cnt_lo) {
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  cnt_hi.assign(m, 0);
  cnt_lo.assign(m, 0);
  for (const Edge e : edges) {
    const std::uint32_t pu = pos[e.u], pv = pos[e.v];
    ++cnt_hi[pu > pv ? pu : pv];  // edge fully left of split u iff max pos <= u
    ++cnt_lo[pu < pv ? pu : pv];  // edge fully right of split u iff min pos > u
  }
  r1.assign(m, 0);
  r2.assign(m, 0);
  long acc = 0;
  for (std::size_t u = 0; u < m; ++u) {
    acc += cnt_hi[u];
    r1[u] = acc;
  }
  acc = 0;
  for (std::size_t u = m; u-- > 0;) {
    r2[u] = acc;  // edges with min position strictly above u
    acc += cnt_lo[u];
  }
}

}  // namespace detail

inline EdgeCountProfile edge_count_profile(const SimilarityGraph& g, Window w) {
  const long n = w.length();
  if (n < 2) throw InvalidWindow("edge-count profile needs a window of length >= 2");
  if (static_cast<long>(g.n_nodes()) != n)
    throw InvalidWindow("graph size does not match window length");
  EdgeCountProfile p;
  p.window = w;
  std::vector<std::uint32_t> pos(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) pos[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i + 1);
  std::vector<long> cnt_hi, cnt_lo;
  detail::profile_from_positions(g.edges(), pos, n, p.r1, p.r2, cnt_hi, cnt_lo);
  return p;
}

// First and second moments of (R1, R2) when group labels are assigned by a
// uniform random permutation of the window.
struct NullMoments {
  double mean_r1 = 0, mean_r2 = 0;
  double var_r1 = 0, var_r2 = 0, cov = 0;
};

namespace detail {

// The three edge-pair counts the moments depend on.
struct EdgePairCounts {
  double e = 0;   // |G|
  double a1 = 0;  // ordered pairs of distinct edges sharing a node
  double a2 = 0;  // ordered pairs of distinct disjoint edges
};

inline EdgePairCounts edge_pair_counts(double num_edges, double sum_deg_sq) {
  EdgePairCounts c;
  c.e = num_edges;
  c.a1 = sum_deg_sq - 2.0 * num_edges;  // Σ d(d−1)
  c.a2 = num_edges * (num_edges - 1.0) - c.a1;
  return c;
}

inline NullMoments moments_from_counts(const EdgePairCounts& c, double n1, double n) {
  const double n2 = n - n1;
  NullMoments m;
  m.mean_r1 = c.e * ratio_or_zero(falling(n1, 2), falling(n, 2));
  m.mean_r2 = c.e * ratio_or_zero(falling(n2, 2), falling(n, 2));
  const double er1sq = m.mean_r1 + c.a1 * ratio_or_zero(falling(n1, 3), falling(n, 3)) +
                       c.a2 * ratio_or_zero(falling(n1, 4), falling(n, 4));
  const double er2sq = m.mean_r2 + c.a1 * ratio_or_zero(falling(n2, 3), falling(n, 3)) +
                       c.a2 * ratio_or_zero(falling(n2, 4), falling(n, 4));
  const double er1r2 =
      c.a2 * ratio_or_zero(falling(n1, 2) * falling(n2, 2), falling(n, 4));
  m.var_r1 = er1sq - m.mean_r1 * m.mean_r1;
  m.var_r2 = er2sq - m.mean_r2 * m.mean_r2;
  m.cov = er1r2 - m.mean_r1 * m.mean_r2;
  if (m.var_r1 < 0) m.var_r1 = 0;  // absorb rounding in degenerate cases
  if (m.var_r2 < 0) m.var_r2 = 0;
  return m;
}

}  // namespace detail

// Exact closed forms by edge-pair combinatorics. Every term whose falling-
// factorial numerator vanishes contributes 0, which makes the formulas exact
// for all window lengths >= 2 (including the short windows where high-order
// falling factorials of the window length vanish as well).
inline NullMoments permutation_moments(const GraphStats& stats, long n1, long n_total) {
  if (n_total < 2) throw InvalidWindow("moments need a window of length >= 2");
  if (static_cast<long>(stats.degrees.size()) != n_total)
    throw InvalidWindow("graph size does not match window length");
  if (n1 < 0 || n1 > n_total) throw ConfigError("n1 outside [0, n_total]");
  const auto counts = detail::edge_pair_counts(static_cast<double>(stats.num_edges),
                                               stats.sum_deg_sq);
  return detail::moments_from_counts(counts, static_cast<double>(n1),
                                     static_cast<double>(n_total));
}

// Quadratic form x^T Q x for a symmetric 2x2 matrix Q, clamped at 0.
struct QuadraticForm {
  double a11 = 0, a12 = 0, a22 = 0;

  double operator()(double d1, double d2) const {
    const double s = a11 * d1 * d1 + 2.0 * a12 * d1 * d2 + a22 * d2 * d2;
    return s > 0.0 ? s : 0.0;
  }
};

// Pseudo-inverse of the 2x2 covariance [[v1, c], [c, v2]]: the plain inverse
// when both eigenvalues clear the tolerance, the rank-restricted inverse when
// only one does, the zero form when none do.
inline QuadraticForm pseudo_inverse(double v1, double c, double v2) {
  const double tol = kSingularRelTol * std::max(1.0, v1 + v2);
  const double mean = 0.5 * (v1 + v2);
  const double disc = std::sqrt(0.25 * (v1 - v2) * (v1 - v2) + c * c);
  const double hi = mean + disc, lo = mean - disc;
  if (lo > tol) {
    const double det = v1 * v2 - c * c;
    return {v2 / det, -c / det, v1 / det};
  }
  if (hi > tol) {
    // Unit eigenvector for hi; pick the better-conditioned expression.
    double x, y;
    if (std::fabs(hi - v2) >= std::fabs(hi - v1)) {
      x = hi - v2;
      y = c;
    } else {
      x = c;
      y = hi - v1;
    }
    double norm = std::sqrt(x * x + y * y);
    if (norm == 0.0) {
      x = v1 >= v2 ? 1.0 : 0.0;
      y = 1.0 - x;
      norm = 1.0;
    }
    x /= norm;
    y /= norm;
    return {x * x / hi, x * y / hi, y * y / hi};
  }
  return {0, 0, 0};
}

// Generalized two-sample statistic at one split.
inline double generalized_stat(double r1, double r2, const NullMoments& m) {
  const QuadraticForm q = pseudo_inverse(m.var_r1, m.cov, m.var_r2);
  return q(r1 - m.mean_r1, r2 - m.mean_r2);
}

// Scan preparation for one window: per-split means and inverted covariances,
// shared between the observed statistic and all permutation replicates.
// A window whose distances were all tied carries no ordering information; its
// statistic is identically zero (degenerate similarity structure).
class ScanContext {
 public:
  ScanContext(const SimilarityGraph& g, Window w, double trim = kDefaultTrim,
              bool degenerate = false)
      : window_(w), edges_(&g.edges()), degenerate_(degenerate) {
    const long n = w.length();
    if (static_cast<long>(g.n_nodes()) != n)
      throw InvalidWindow("graph size does not match window length");
    t_left_ = scan_left(w, trim);
    t_right_ = scan_right(w, trim);
    if (t_left_ > t_right_)
      throw WindowTooShort("no admissible split inside the trimmed scan range");
    double sum_deg_sq = 0;
    {
      std::vector<std::uint32_t> deg(g.n_nodes(), 0);
      for (const Edge e : *edges_) {
        ++deg[e.u];
        ++deg[e.v];
      }
      for (const auto d : deg) sum_deg_sq += static_cast<double>(d) * d;
    }
    const auto counts =
        detail::edge_pair_counts(static_cast<double>(g.num_edges()), sum_deg_sq);
    const std::size_t m = static_cast<std::size_t>(t_right_ - t_left_ + 1);
    mu1_.resize(m);
    mu2_.resize(m);
    forms_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const long t = t_left_ + static_cast<long>(i);
      const auto mom = detail::moments_from_counts(
          counts, static_cast<double>(t - w.a + 1), static_cast<double>(n));
      mu1_[i] = mom.mean_r1;
      mu2_[i] = mom.mean_r2;
      forms_[i] = degenerate_ ? QuadraticForm{0, 0, 0}
                              : pseudo_inverse(mom.var_r1, mom.cov, mom.var_r2);
    }
  }

  const Window& window() const { return window_; }
  long t_left() const { return t_left_; }
  long t_right() const { return t_right_; }
  bool degenerate() const { return degenerate_; }
  const std::vector<Edge>& edges() const { return *edges_; }

  double stat_at(long t, double r1, double r2) const {
    const std::size_t i = static_cast<std::size_t>(t - t_left_);
    return forms_[i](r1 - mu1_[i], r2 - mu2_[i]);
  }

  // Max statistic over the scan range for a full profile (indexed by u);
  // the smallest split wins ties.
  std::pair<long, double> best_split(std::span<const long> r1,
                                     std::span<const long> r2) const {
    long best_t = t_left_;
    double best_s = -1.0;
    for (long t = t_left_; t <= t_right_; ++t) {
      const std::size_t u = static_cast<std::size_t>(t - window_.a + 1);
      const double s =
          stat_at(t, static_cast<double>(r1[u]), static_cast<double>(r2[u]));
      if (s > best_s) {
        best_s = s;
        best_t = t;
      }
    }
    return {best_t, best_s};
  }

 private:
  Window window_;
  const std::vector<Edge>* edges_;
  bool degenerate_ = false;
  long t_left_ = 0, t_right_ = 0;
  std::vector<double> mu1_, mu2_;
  std::vector<QuadraticForm> forms_;
};

struct ScanResult {
  Window window;
  long t_hat = 0;
  double s_max = 0;
  double p_value = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> s_profile;  // per split of the scan range when requested
};

// Observed scan of one window. `dist` is the window's own distance matrix and
// is consulted only for the tied-degeneracy check.
inline ScanResult scan_window(const DistanceMatrix& dist, const SimilarityGraph& g,
                              Window w, double trim = kDefaultTrim,
                              bool keep_profile = false) {
  ScanContext ctx(g, w, trim, dist.all_tied());
  const EdgeCountProfile prof = edge_count_profile(g, w);
  const auto [t_hat, s_max] = ctx.best_split(prof.r1, prof.r2);
  ScanResult res;
  res.window = w;
  res.t_hat = t_hat;
  res.s_max = s_max;
  if (keep_profile) {
    res.s_profile.reserve(static_cast<std::size_t>(ctx.t_right() - ctx.t_left() + 1));
    for (long t = ctx.t_left(); t <= ctx.t_right(); ++t)
      res.s_profile.push_back(ctx.stat_at(t, static_cast<double>(prof.r1_at(t)),
                                          static_cast<double>(prof.r2_at(t))));
  }
  return res;
}

namespace detail {

// Scratch buffers for one permutation replicate (reused across replicates).
struct PermScratch {
  std::vector<std::uint32_t> pos;
  std::vector<long> r1, r2, cnt_hi, cnt_lo;
};

inline double permuted_max(const ScanContext& ctx, Rng& rng, PermScratch& scr) {
  const long n = ctx.window().length();
  scr.pos.resize(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    scr.pos[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i + 1);
  rng.shuffle(scr.pos);
  profile_from_positions(ctx.edges(), scr.pos, n, scr.r1, scr.r2, scr.cnt_hi,
                         scr.cnt_lo);
  return ctx.best_split(scr.r1, scr.r2).second;
}

// Monte Carlo permutation p-value with the add-one estimator. Each replicate
// draws its generator from stream.child(replicate index), so the result does
// not depend on how replicates are scheduled.
inline double permutation_pvalue_ctx(const ScanContext& ctx, double s_obs, long B,
                                     RngStream stream) {
  if (B < 1) throw ConfigError("permutation count must be >= 1");
  std::vector<std::uint8_t> exceeds(static_cast<std::size_t>(B), 0);
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t rep) {
    thread_local PermScratch scr;
    Rng rng = stream.child(rep).rng();
    if (permuted_max(ctx, rng, scr) >= s_obs) exceeds[rep] = 1;
  });
  long count = 0;
  for (const auto e : exceeds) count += e;
  return (1.0 + static_cast<double>(count)) / (static_cast<double>(B) + 1.0);
}

}  // namespace detail

inline double permutation_pvalue(const DistanceMatrix& dist, const SimilarityGraph& g,
                                 Window w, double s_obs, long B, RngStream stream,
                                 double trim = kDefaultTrim) {
  ScanContext ctx(g, w, trim, dist.all_tied());
  return detail::permutation_pvalue_ctx(ctx, s_obs, B, stream);
}

// Observed scan plus its permutation p-value, sharing one ScanContext.
inline ScanResult scan_and_pvalue(const DistanceMatrix& dist, const SimilarityGraph& g,
                                  Window w, long B, RngStream stream,
                                  double trim = kDefaultTrim) {
  ScanContext ctx(g, w, trim, dist.all_tied());
  const EdgeCountProfile prof = edge_count_profile(g, w);
  const auto [t_hat, s_max] = ctx.best_split(prof.r1, prof.r2);
  ScanResult res;
  res.window = w;
  res.t_hat = t_hat;
  res.s_max = s_max;
  res.p_value = detail::permutation_pvalue_ctx(ctx, s_max, B, stream);
  return res;
}

}  // namespace gmulti
