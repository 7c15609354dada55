#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gmulti/detect.hpp"
#include "gmulti/errors.hpp"
#include "gmulti/matrix.hpp"
#include "gmulti/parallel.hpp"
#include "gmulti/rng.hpp"

namespace gmulti {

// One synthetic scenario. dimension is the coordinate count (models 1-8) or
// the node count of the generated networks (model 9). delta/sigma override the
// per-dimension defaults where the model takes them; NaN = use the default.
struct ModelSpec {
  int model_id = 1;
  long dimension = 100;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
};

struct LabeledSequence {
  DataMatrix data;
  std::vector<long> true_taus;
};

// --- elementary row generators -------------------------------------------

inline void fill_iid_normal(std::span<double> row, Rng& rng) {
  for (double& x : row) x = rng.normal();
}

// AR(1)-correlated normal row: cov[j][k] = rho^|j-k|, unit variances (the
// recursion is the exact Cholesky factor of that covariance).
inline void fill_ar1_normal(std::span<double> row, double rho, Rng& rng) {
  if (row.empty()) return;
  const double innov = std::sqrt(1.0 - rho * rho);
  double prev = rng.normal();
  row[0] = prev;
  for (std::size_t j = 1; j < row.size(); ++j) {
    prev = rho * prev + innov * rng.normal();
    row[j] = prev;
  }
}

// Multivariate Cauchy: mu + L z / |w| with z standard normal and w an
// independent standard normal scalar. `fill` writes L z into the row.
template <typename Fill>
inline void cauchy_row(std::span<double> row, Rng& rng, const Fill& fill) {
  fill(row, rng);
  double w = rng.normal();
  while (w == 0.0) w = rng.normal();
  const double inv = 1.0 / std::fabs(w);
  for (double& x : row) x *= inv;
}

inline void fill_shifted_exponential(std::span<double> row, Rng& rng) {
  for (double& x : row) x = rng.exponential() - 1.0;
}

// Binary adjacency of one configuration-model draw, vectorized as the upper
// triangle (row-major, j < k). Half-edges are paired uniformly; self-loops
// are dropped and parallel edges collapsed.
inline std::vector<double> gen_configuration_network(
    const std::vector<int>& degree_seq, Rng& rng) {
  const std::size_t m = degree_seq.size();
  long total = 0;
  for (const int d : degree_seq) {
    if (d < 0) throw ConfigError("negative degree");
    total += d;
  }
  if (total % 2 != 0) throw ConfigError("degree sum must be even");
  std::vector<std::uint32_t> half;
  half.reserve(static_cast<std::size_t>(total));
  for (std::size_t v = 0; v < m; ++v)
    for (int c = 0; c < degree_seq[v]; ++c) half.push_back(static_cast<std::uint32_t>(v));
  rng.shuffle(half);
  std::vector<double> adj(m * (m - 1) / 2, 0.0);
  const auto index = [m](std::size_t j, std::size_t k) {
    return j * m - j * (j + 1) / 2 + (k - j - 1);
  };
  for (std::size_t i = 0; i + 1 < half.size(); i += 2) {
    const std::uint32_t a = half[i], b = half[i + 1];
    if (a == b) continue;
    adj[index(std::min(a, b), std::max(a, b))] = 1.0;
  }
  return adj;
}

namespace detail {

// Per-dimension (delta, sigma) defaults for the tabulated scenarios.
inline std::pair<double, double> model_params(int model_id, long d, double delta,
                                              double sigma) {
  struct Row {
    long d;
    double delta, sigma;
  };
  static constexpr Row kModel5[] = {{20, 0.6, 1.85},
                                    {50, 0.45, 1.75},
                                    {100, 0.37, 1.55},
                                    {500, 0.1, 1.4},
                                    {1000, 0.05, 1.35}};
  static constexpr Row kModel6[] = {{20, 1.1, 1.0},
                                    {50, 0.85, 1.0},
                                    {100, 0.76, 1.0},
                                    {500, 0.64, 1.0},
                                    {1000, 0.6, 1.0}};
  static constexpr Row kModel7[] = {{20, 0.0, 1.9},
                                    {50, 0.0, 1.65},
                                    {100, 0.0, 1.45},
                                    {500, 0.0, 1.2},
                                    {1000, 0.0, 1.15}};
  const Row* table = nullptr;
  std::size_t count = 0;
  switch (model_id) {
    case 5: table = kModel5; count = std::size(kModel5); break;
    case 6: table = kModel6; count = std::size(kModel6); break;
    case 7: table = kModel7; count = std::size(kModel7); break;
    default: return {delta, sigma};
  }
  std::pair<double, double> out{delta, sigma};
  if (std::isnan(out.first) || std::isnan(out.second)) {
    const Row* hit = nullptr;
    for (std::size_t i = 0; i < count; ++i)
      if (table[i].d == d) hit = &table[i];
    if (!hit)
      throw ConfigError("model " + std::to_string(model_id) +
                        " has no default (delta, sigma) for dimension " +
                        std::to_string(d) + "; pass explicit values");
    if (std::isnan(out.first)) out.first = hit->delta;
    if (std::isnan(out.second)) out.second = hit->sigma;
  }
  return out;
}

// Sparse location direction: first `ones` coordinates 1, the rest 0.
inline void add_location(std::span<double> row, double coef, std::size_t ones) {
  for (std::size_t j = 0; j < ones && j < row.size(); ++j) row[j] += coef;
}

inline void scale_row(std::span<double> row, double factor) {
  if (factor == 1.0) return;
  for (double& x : row) x *= factor;
}

}  // namespace detail

// Generates one sequence from the model table. Each observation draws from its
// own substream, so rows are reproducible independently of evaluation order.
inline LabeledSequence generate(const ModelSpec& spec, RngStream stream) {
  const long d = spec.dimension;
  if (d < 1) throw ConfigError("dimension must be >= 1");
  const bool needs_logd =
      spec.model_id == 1 || spec.model_id == 3 || spec.model_id == 4 ||
      spec.model_id == 8;
  if (needs_logd && d < 2)
    throw ConfigError("model " + std::to_string(spec.model_id) +
                      " needs dimension >= 2");
  const double logd = d >= 2 ? std::log(static_cast<double>(d)) : 1.0;
  const std::size_t sparse = static_cast<std::size_t>(d / 5);

  LabeledSequence out;
  const auto in_blocks = [](long i, std::initializer_list<std::pair<long, long>> blocks) {
    for (const auto& [lo, hi] : blocks)
      if (i >= lo && i <= hi) return true;
    return false;
  };

  long n = 0;
  switch (spec.model_id) {
    case 1: n = 120; out.true_taus = {20, 40, 60, 80, 100}; break;
    case 2: n = 180; out.true_taus = {30, 60, 90, 120, 150}; break;
    case 3: n = 300; out.true_taus = {50, 100, 150, 200, 250}; break;
    case 4: n = 240; out.true_taus = {40, 80, 120, 160, 200}; break;
    case 5: n = 300; out.true_taus = {50, 100, 150, 200, 250}; break;
    case 6: n = 300; out.true_taus = {40, 90, 145, 190, 255}; break;
    case 7: n = 300; out.true_taus = {55, 90, 140, 195, 255}; break;
    case 8: n = 260; out.true_taus = {50, 65, 110, 160, 185}; break;
    case 9: n = 240; out.true_taus = {30, 70, 115, 150, 205}; break;
    default: throw ConfigError("unknown model id " + std::to_string(spec.model_id));
  }

  if (spec.model_id == 9) {
    if (d < 5) throw ConfigError("model 9 needs at least 5 nodes");
    const std::size_t cols = static_cast<std::size_t>(d) * (d - 1) / 2;
    out.data = DataMatrix(static_cast<std::size_t>(n), cols);
    std::vector<int> flat(static_cast<std::size_t>(d), 2);
    std::vector<int> bumped(static_cast<std::size_t>(d), 2);
    for (int v = 0; v < 4; ++v) bumped[static_cast<std::size_t>(v)] = 4;
    for (long i = 1; i <= n; ++i) {
      Rng rng = stream.child(static_cast<std::uint64_t>(i)).rng();
      const bool uniform =
          in_blocks(i, {{1, 30}, {71, 115}, {151, 205}});
      const std::vector<double> row =
          gen_configuration_network(uniform ? flat : bumped, rng);
      auto dst = out.data.row(static_cast<std::size_t>(i - 1));
      std::copy(row.begin(), row.end(), dst.begin());
    }
    return out;
  }

  const auto [delta, sigma] =
      detail::model_params(spec.model_id, d, spec.delta, spec.sigma);
  out.data = DataMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
  for (long i = 1; i <= n; ++i) {
    Rng rng = stream.child(static_cast<std::uint64_t>(i)).rng();
    auto row = out.data.row(static_cast<std::size_t>(i - 1));
    switch (spec.model_id) {
      case 1:
        fill_iid_normal(row, rng);
        if (in_blocks(i, {{21, 40}, {61, 80}, {101, 120}}))
          detail::add_location(row, 5.0 / (4.0 * logd), row.size());
        break;
      case 2: {
        fill_iid_normal(row, rng);
        if (in_blocks(i, {{31, 60}, {91, 120}, {151, 180}}))
          detail::scale_row(row, std::sqrt(1.0 + 2.0 / std::sqrt(static_cast<double>(d))));
        break;
      }
      case 3:
        cauchy_row(row, rng, [](std::span<double> r, Rng& g) { fill_iid_normal(r, g); });
        if (in_blocks(i, {{51, 100}, {151, 200}, {251, 300}}))
          detail::add_location(row, 7.0 / (4.0 * logd), row.size());
        break;
      case 4:
        if (in_blocks(i, {{41, 80}, {121, 160}, {201, 240}})) {
          fill_iid_normal(row, rng);
          detail::add_location(row, 1.0 / logd, row.size());
        } else {
          fill_ar1_normal(row, 0.3, rng);
        }
        break;
      case 5:
        fill_ar1_normal(row, 0.3, rng);
        if (in_blocks(i, {{51, 100}, {151, 200}, {251, 300}})) {
          detail::scale_row(row, std::sqrt(sigma));
          detail::add_location(row, delta, sparse);
        }
        break;
      case 6:
        if (in_blocks(i, {{41, 90}, {146, 190}, {256, 300}})) {
          cauchy_row(row, rng,
                     [](std::span<double> r, Rng& g) { fill_ar1_normal(r, 0.3, g); });
          detail::add_location(row, delta, sparse);
        } else {
          cauchy_row(row, rng, [](std::span<double> r, Rng& g) { fill_iid_normal(r, g); });
        }
        break;
      case 7:
        if (in_blocks(i, {{56, 90}, {141, 195}, {256, 300}})) {
          fill_ar1_normal(row, 0.3, rng);
          detail::scale_row(row, std::sqrt(sigma));
        } else {
          fill_iid_normal(row, rng);
        }
        break;
      case 8:
        if (i <= 50) {
          cauchy_row(row, rng, [](std::span<double> r, Rng& g) { fill_iid_normal(r, g); });
        } else if (i <= 65) {
          fill_ar1_normal(row, 0.8, rng);
          detail::add_location(row, 7.0 / logd, sparse);
        } else if (i <= 110) {
          cauchy_row(row, rng, [](std::span<double> r, Rng& g) {
            fill_iid_normal(r, g);
            detail::scale_row(r, std::sqrt(2.0));
          });
        } else if (i <= 160) {
          fill_iid_normal(row, rng);
          detail::add_location(row, -5.0 / (2.0 * logd), sparse);
        } else if (i <= 185) {
          fill_ar1_normal(row, 0.8, rng);
          detail::add_location(row, 2.0 / logd, sparse);
        } else {
          fill_shifted_exponential(row, rng);
        }
        break;
      default: break;
    }
  }
  return out;
}

inline LabeledSequence generate(const ModelSpec& spec) {
  return generate(spec, RngStream{spec.seed});
}

// --- detection accuracy ----------------------------------------------------

struct DetectionScore {
  long true_detected = 0;
  long false_detected = 0;
};

// Greedy one-to-one matching in increasing order: each true point takes the
// first unused estimate within +-tol.
inline DetectionScore detection_metrics(const std::vector<long>& tau_hat,
                                        const std::vector<long>& tau_true,
                                        long tol = 2) {
  DetectionScore score;
  std::size_t i = 0;
  for (const long t : tau_true) {
    while (i < tau_hat.size() && tau_hat[i] < t - tol) ++i;
    if (i < tau_hat.size() && std::labs(tau_hat[i] - t) <= tol) {
      ++score.true_detected;
      ++i;
    }
  }
  score.false_detected = static_cast<long>(tau_hat.size()) - score.true_detected;
  return score;
}

// --- benchmark runner ------------------------------------------------------

struct BenchmarkRow {
  int model_id = 0;
  long dimension = 0;
  Method method = Method::wbs;
  long reps = 0;
  double mean_true = 0, sd_true = 0;
  double mean_false = 0, sd_false = 0;
  double wall_ms = 0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::uint64_t seed = 0;
};

// Runs `reps` independent generate-detect-score replicates per model. Every
// replicate derives its stream from (seed, model index, replicate index), so
// reports are identical for equal seeds regardless of scheduling; wall_ms is
// the one non-deterministic column.
inline BenchmarkReport run_benchmark(const std::vector<ModelSpec>& models,
                                     Method method, long reps, std::uint64_t seed,
                                     const PipelineConfig& base = {}) {
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (models.empty()) throw ConfigError("no models given");
  BenchmarkReport report;
  report.seed = seed;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const ModelSpec& spec = models[mi];
    // resolve parameter defaults once so bad configs fail before the run
    detail::model_params(spec.model_id, spec.dimension, spec.delta, spec.sigma);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<DetectionScore> scores(static_cast<std::size_t>(reps));
    const RngStream model_stream = RngStream{seed}.child(mi);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
      const RngStream rep_stream = model_stream.child(r);
      const LabeledSequence seq = generate(spec, rep_stream.child(0));
      PipelineConfig cfg = base;
      cfg.method = method;
      const DetectionReport det =
          run_pipeline(pairwise_distances(seq.data, cfg.metric),
                       static_cast<long>(seq.data.cols()), cfg, rep_stream.child(1));
      scores[r] = detection_metrics(det.change_points, seq.true_taus);
    });
    BenchmarkRow row;
    row.model_id = spec.model_id;
    row.dimension = spec.dimension;
    row.method = method;
    row.reps = reps;
    double st = 0, sf = 0;
    for (const auto& s : scores) {
      st += static_cast<double>(s.true_detected);
      sf += static_cast<double>(s.false_detected);
    }
    row.mean_true = st / static_cast<double>(reps);
    row.mean_false = sf / static_cast<double>(reps);
    double vt = 0, vf = 0;
    for (const auto& s : scores) {
      vt += (s.true_detected - row.mean_true) * (s.true_detected - row.mean_true);
      vf += (s.false_detected - row.mean_false) * (s.false_detected - row.mean_false);
    }
    if (reps > 1) {
      row.sd_true = std::sqrt(vt / static_cast<double>(reps - 1));
      row.sd_false = std::sqrt(vf / static_cast<double>(reps - 1));
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    report.rows.push_back(row);
  }
  return report;
}

// CSV with a fixed header; wall_ms is informational and excluded from
// determinism comparisons.
inline std::string benchmark_to_csv(const BenchmarkReport& report) {
  std::string out =
      "model_id,d,method,reps,mean_true,sd_true,mean_false,sd_false,wall_ms\n";
  char buf[256];
  for (const BenchmarkRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%d,%ld,%s,%ld,%.6f,%.6f,%.6f,%.6f,%.3f\n",
                  r.model_id, r.dimension, to_string(r.method), r.reps, r.mean_true,
                  r.sd_true, r.mean_false, r.sd_false, r.wall_ms);
    out += buf;
  }
  return out;
}

inline nlohmann::json benchmark_to_json(const BenchmarkReport& report,
                                        bool include_timing = true) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "benchmark";
  j["seed"] = report.seed;
  j["rows"] = nlohmann::json::array();
  for (const BenchmarkRow& r : report.rows) {
    nlohmann::json row{{"model_id", r.model_id}, {"d", r.dimension},
                       {"method", to_string(r.method)}, {"reps", r.reps},
                       {"mean_true", r.mean_true}, {"sd_true", r.sd_true},
                       {"mean_false", r.mean_false}, {"sd_false", r.sd_false}};
    if (include_timing) row["wall_ms"] = r.wall_ms;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

}  // namespace gmulti
