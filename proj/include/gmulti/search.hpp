#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gmulti/edgecount.hpp"
#include "gmulti/errors.hpp"
#include "gmulti/graph.hpp"
#include "gmulti/intervals.hpp"
#include "gmulti/parallel.hpp"
#include "gmulti/rng.hpp"

namespace gmulti {

enum class Method { wbs, sbs };

inline Method method_from_string(const std::string& name) {
  if (name == "wbs") return Method::wbs;
  if (name == "sbs") return Method::sbs;
  throw ConfigError("unknown method: " + name);
}

inline const char* to_string(Method m) { return m == Method::wbs ? "wbs" : "sbs"; }

// Stage-1 search settings.
struct SearchConfig {
  double alpha = 0.01;
  long num_intervals = 100;        // L, wbs only
  double gamma = 0.70710678118654752;  // sqrt(0.5), sbs only
  long min_len = 10;
  long num_permutations = kDefaultPermutations;
  std::uint64_t seed = 0;
  double trim = kDefaultTrim;
  unsigned k_cap = 30;  // stage-1 graph rule: min(k_cap, floor(sqrt(len)))-MST

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
    if (num_intervals < 1) throw ConfigError("interval count must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in (0, 1)");
    if (min_len < 4) throw ConfigError("min-len must be >= 4");
    if (num_permutations < 1) throw ConfigError("permutation count must be >= 1");
    if (!(trim >= 0.0 && trim < 0.5)) throw ConfigError("trim must be in [0, 0.5)");
    if (k_cap < 1) throw ConfigError("graph cap must be >= 1");
  }
};

// One accepted change-point with its provenance.
struct Candidate {
  long tau = 0;
  Interval source;
  double p_value = 1.0;
  double s_max = 0.0;
};

// Strictly increasing candidate change-points.
class CandidateSet {
 public:
  // Inserts in sorted position; a duplicate split is ignored.
  void insert(const Candidate& c) {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), c.tau,
        [](const Candidate& e, long tau) { return e.tau < tau; });
    if (it != entries_.end() && it->tau == c.tau) return;
    entries_.insert(it, c);
  }

  const std::vector<Candidate>& entries() const { return entries_; }

  std::vector<long> taus() const {
    std::vector<long> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.tau);
    return out;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Candidate> entries_;
};

namespace detail {

struct IntervalOutcome {
  bool valid = false;
  double p_value = 1.0;
  double s_max = -1.0;
  long t_hat = 0;
};

// Full scan of one interval: window-local graph, observed max, Monte Carlo p.
inline IntervalOutcome evaluate_interval(const DistanceMatrix& dist, Interval iv,
                                         const SearchConfig& cfg, RngStream pstream) {
  IntervalOutcome out;
  const DistanceMatrix local =
      dist.slice(static_cast<std::size_t>(iv.start - 1),
                 static_cast<std::size_t>(iv.end - 1));
  const unsigned k = default_k(static_cast<std::size_t>(iv.length()), cfg.k_cap);
  const SimilarityGraph g = build_kmst(local, k);
  const Window w{iv.start, iv.end};
  ScanContext ctx(g, w, cfg.trim, local.all_tied());
  const EdgeCountProfile prof = edge_count_profile(g, w);
  const auto [t_hat, s_max] = ctx.best_split(prof.r1, prof.r2);
  out.t_hat = t_hat;
  out.s_max = s_max;
  out.p_value = permutation_pvalue_ctx(ctx, s_max, cfg.num_permutations, pstream);
  out.valid = true;
  return out;
}

// Deterministic argmin: smallest p, then largest s_max, then smallest index.
inline std::size_t pick_best(const std::vector<IntervalOutcome>& outcomes) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    const auto& b = outcomes[best];
    if (!o.valid) continue;
    if (!b.valid || o.p_value < b.p_value ||
        (o.p_value == b.p_value && o.s_max > b.s_max))
      best = i;
  }
  return best;
}

// Shared recursion body: evaluate this level's intervals, accept the best
// split if significant, recurse on both sides. `next` supplies each child
// call's interval list. Stream tags: 0 = interval sampling (wbs), 1 = p-value
// replicates, 2/3 = left/right recursion.
template <typename MakeIntervals>
void search_recurse(const DistanceMatrix& dist, Window w, const SearchConfig& cfg,
                    const MakeIntervals& make_intervals, RngStream stream,
                    CandidateSet& out) {
  if (w.length() < cfg.min_len) return;
  const std::vector<Interval> ivs = make_intervals(w, stream.child(0));
  if (ivs.empty()) return;
  std::vector<IntervalOutcome> outcomes(ivs.size());
  const RngStream pstream = stream.child(1);
  parallel_for(ivs.size(), [&](std::size_t i) {
    try {
      outcomes[i] = evaluate_interval(dist, ivs[i], cfg, pstream.child(i));
    } catch (const WindowTooShort&) {
      // interval admits no trimmed split; leave it invalid
    }
  });
  const std::size_t best = pick_best(outcomes);
  const IntervalOutcome& chosen = outcomes[best];
  if (!chosen.valid || !(chosen.p_value < cfg.alpha)) return;
  out.insert({chosen.t_hat, ivs[best], chosen.p_value, chosen.s_max});
  search_recurse(dist, {w.a, chosen.t_hat}, cfg, make_intervals, stream.child(2), out);
  search_recurse(dist, {chosen.t_hat + 1, w.b}, cfg, make_intervals, stream.child(3),
                 out);
}

}  // namespace detail

// Wild binary segmentation: every recursion level draws fresh random
// intervals (the full window first at index 0). Output is a deterministic
// function of (dist, cfg, stream).
inline void gwbs(const DistanceMatrix& dist, Window w, const SearchConfig& cfg,
                 RngStream stream, CandidateSet& out) {
  cfg.validate();
  detail::search_recurse(
      dist, w, cfg,
      [&cfg](Window win, RngStream s) {
        Rng rng = s.rng();
        return sample_intervals(win.a, win.b, cfg.num_intervals, cfg.min_len, rng);
      },
      stream, out);
}

// Seeded binary segmentation: each level tests the window itself (index 0)
// plus every precomputed seed lying fully inside it. Output is a
// deterministic function of (dist, cfg) alone.
inline void gsbs(const DistanceMatrix& dist, Window w, const SearchConfig& cfg,
                 const std::vector<Interval>& seeds, RngStream stream,
                 CandidateSet& out) {
  cfg.validate();
  detail::search_recurse(
      dist, w, cfg,
      [&seeds](Window win, RngStream) {
        std::vector<Interval> ivs{{win.a, win.b}};
        for (const Interval s : seeds)
          if (s.start >= win.a && s.end <= win.b &&
              !(s.start == win.a && s.end == win.b))
            ivs.push_back(s);
        return ivs;
      },
      stream, out);
}

}  // namespace gmulti
