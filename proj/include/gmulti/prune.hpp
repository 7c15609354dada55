#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <vector>

#include "gmulti/edgecount.hpp"
#include "gmulti/errors.hpp"
#include "gmulti/graph.hpp"
#include "gmulti/search.hpp"

namespace gmulti {

// Stage-2 pruning settings.
struct PruneConfig {
  unsigned k_cap = 5;  // stage-2 graph rule: min(k_cap, floor(sqrt(len)))-MST
  // Nonzero replaces the length rule with a constant k (clamped to len - 1),
  // keeping window statistics comparable across very different window sizes.
  unsigned fixed_k = 0;
  double penalty_c = 2.0;
  double trim = kDefaultTrim;

  void validate() const {
    if (k_cap < 1) throw ConfigError("graph cap must be >= 1");
    if (!(penalty_c > 0.0)) throw ConfigError("penalty must be > 0");
    if (!(trim >= 0.0 && trim < 0.5)) throw ConfigError("trim must be in [0, 0.5)");
  }
};

// Midpoints between consecutive candidates, delimiting the non-overlapping
// evaluation windows: {0, ceil((τ_1+τ_2)/2), ..., n}.
inline std::vector<long> boundary_set(const std::vector<long>& tau, long n) {
  if (tau.empty()) throw EmptyCandidates("boundary set needs at least one candidate");
  for (std::size_t j = 0; j < tau.size(); ++j) {
    if (tau[j] < 1 || tau[j] > n - 1)
      throw InvalidWindow("candidate outside (0, n)");
    if (j > 0 && tau[j] <= tau[j - 1])
      throw InvalidWindow("candidates must be strictly increasing");
  }
  std::vector<long> eta;
  eta.reserve(tau.size() + 1);
  eta.push_back(0);
  for (std::size_t j = 1; j < tau.size(); ++j)
    eta.push_back((tau[j - 1] + tau[j] + 1) / 2);
  eta.push_back(n);
  return eta;
}

namespace detail {

// Generalized statistic of window [lo, hi] at the fixed split t, with the
// pruning-stage graph. Degenerate configurations (window shorter than 4, or a
// split outside the trimmed scan range) contribute 0 and are counted.
inline double local_stat(const DistanceMatrix& dist, long lo, long hi, long t,
                         const PruneConfig& pc, long* degenerate) {
  const long len = hi - lo + 1;
  const Window w{lo, hi};
  if (len < 4 || t < lo || t >= hi || t < scan_left(w, pc.trim) ||
      t > scan_right(w, pc.trim)) {
    if (degenerate) ++*degenerate;
    return 0.0;
  }
  const DistanceMatrix local = dist.slice(static_cast<std::size_t>(lo - 1),
                                          static_cast<std::size_t>(hi - 1));
  if (local.all_tied()) return 0.0;  // no dissimilarity information
  const unsigned k =
      pc.fixed_k > 0
          ? std::min(pc.fixed_k, static_cast<unsigned>(len - 1))
          : default_k(static_cast<std::size_t>(len), pc.k_cap);
  const SimilarityGraph g = build_kmst(local, k);
  // Only the counts at one split are needed, not a full profile.
  long r1 = 0, r2 = 0;
  const long u = t - lo + 1;
  for (const Edge e : g.edges()) {
    const long pu = static_cast<long>(e.u) + 1;
    const long pv = static_cast<long>(e.v) + 1;
    if (std::max(pu, pv) <= u) ++r1;
    if (std::min(pu, pv) > u) ++r2;
  }
  double sum_deg_sq = 0;
  {
    std::vector<std::uint32_t> deg(g.n_nodes(), 0);
    for (const Edge e : g.edges()) {
      ++deg[e.u];
      ++deg[e.v];
    }
    for (const auto d : deg) sum_deg_sq += static_cast<double>(d) * d;
  }
  const auto counts =
      edge_pair_counts(static_cast<double>(g.num_edges()), sum_deg_sq);
  const auto m = moments_from_counts(counts, static_cast<double>(u),
                                     static_cast<double>(len));
  return generalized_stat(static_cast<double>(r1), static_cast<double>(r2), m);
}

}  // namespace detail

// Sum of per-window statistics at the candidate splits, windows delimited by
// the boundary set (non-overlapping).
inline double adjacent_sum(const DistanceMatrix& dist, const std::vector<long>& tau,
                           const PruneConfig& pc = {}, long* degenerate = nullptr) {
  if (tau.empty()) return 0.0;
  const long n = static_cast<long>(dist.size());
  const std::vector<long> eta = boundary_set(tau, n);
  double sum = 0.0;
  for (std::size_t j = 0; j < tau.size(); ++j)
    sum += detail::local_stat(dist, eta[j] + 1, eta[j + 1], tau[j], pc, degenerate);
  return sum;
}

// Same sum over the expanded, overlapping windows: the j-th window runs from
// just after the previous candidate to the next one (sequence ends at the
// outer positions).
inline double expanded_adjacent_sum(const DistanceMatrix& dist,
                                    const std::vector<long>& tau,
                                    const PruneConfig& pc = {},
                                    long* degenerate = nullptr) {
  if (tau.empty()) return 0.0;
  const long n = static_cast<long>(dist.size());
  boundary_set(tau, n);  // validates ordering/range
  const std::size_t m = tau.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const long lo = (j == 0 ? 0 : tau[j - 1]) + 1;
    const long hi = j + 1 < m ? tau[j + 1] : n;
    sum += detail::local_stat(dist, lo, hi, tau[j], pc, degenerate);
  }
  return sum;
}

// Penalized goodness-of-fit scores; natural log.
inline double ep_bic(double eas, long m, long n, double c = 2.0) {
  return eas - c * static_cast<double>(m) * std::log(static_cast<double>(n));
}
inline double pseudo_bic(double as, long m, long n) {
  return as - 2.0 * static_cast<double>(m) * std::log(static_cast<double>(n));
}

// One model size along the elimination path.
struct EliminationStep {
  std::vector<long> points;  // candidate set of size l
  double ep_bic = 0.0;
  long removed = 0;  // point whose removal produced the next (smaller) step
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;  // indexed by model size l = 0..m̃
  std::size_t chosen_m = 0;
  long degenerate_windows = 0;

  const std::vector<long>& selected() const { return steps[chosen_m].points; }
};

// Backward elimination under ep-BIC: starting from all candidates, repeatedly
// drop the point whose removal scores best (ties remove the smallest point),
// then pick the model size with maximal ep-BIC (ties prefer fewer points; the
// empty set scores 0). eAS windows are re-derived from the surviving
// neighbors at every evaluation.
inline EliminationTrace backward_eliminate(const DistanceMatrix& dist,
                                           std::vector<long> tau,
                                           const PruneConfig& pc = {}) {
  pc.validate();
  std::sort(tau.begin(), tau.end());
  tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
  const long n = static_cast<long>(dist.size());
  const std::size_t m0 = tau.size();

  EliminationTrace trace;
  trace.steps.resize(m0 + 1);

  // Window triples repeat heavily across steps; cache each split evaluation
  // so every degenerate window is counted once.
  std::map<std::tuple<long, long, long>, double> cache;
  const auto window_stat = [&](long lo, long t, long hi) {
    const auto key = std::make_tuple(lo, t, hi);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v =
        detail::local_stat(dist, lo, hi, t, pc, &trace.degenerate_windows);
    cache.emplace(key, v);
    return v;
  };
  const auto eas_of = [&](const std::vector<long>& set) {
    double sum = 0.0;
    for (std::size_t j = 0; j < set.size(); ++j) {
      const long lo = (j == 0 ? 0 : set[j - 1]) + 1;
      const long hi = j + 1 < set.size() ? set[j + 1] : n;
      sum += window_stat(lo, set[j], hi);
    }
    return sum;
  };

  std::vector<long> cur = tau;
  trace.steps[m0] = {cur, ep_bic(eas_of(cur), static_cast<long>(m0), n, pc.penalty_c),
                     0};
  for (std::size_t l = m0; l >= 1; --l) {
    std::size_t best_j = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < l; ++j) {
      std::vector<long> cand = cur;
      cand.erase(cand.begin() + static_cast<long>(j));
      const double v =
          ep_bic(eas_of(cand), static_cast<long>(l) - 1, n, pc.penalty_c);
      if (v > best_val) {  // strict: ties keep the earlier (smaller) point
        best_val = v;
        best_j = j;
      }
    }
    trace.steps[l].removed = cur[best_j];
    cur.erase(cur.begin() + static_cast<long>(best_j));
    trace.steps[l - 1] = {cur, best_val, 0};
  }
  trace.steps[0].ep_bic = 0.0;  // empty model scores 0 by definition

  trace.chosen_m = 0;
  for (std::size_t l = 1; l <= m0; ++l)
    if (trace.steps[l].ep_bic > trace.steps[trace.chosen_m].ep_bic)
      trace.chosen_m = l;  // strict: ties prefer the smaller model
  return trace;
}

inline EliminationTrace backward_eliminate(const DistanceMatrix& dist,
                                           const CandidateSet& candidates,
                                           const PruneConfig& pc = {}) {
  return backward_eliminate(dist, candidates.taus(), pc);
}

}  // namespace gmulti
