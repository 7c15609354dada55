#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"

#include "gmulti/dendrogram.hpp"
#include "gmulti/distance.hpp"
#include "gmulti/errors.hpp"
#include "gmulti/matrix.hpp"
#include "gmulti/prune.hpp"
#include "gmulti/search.hpp"

namespace gmulti {

// Full two-stage configuration: search strategy plus pruning settings.
struct PipelineConfig {
  Method method = Method::wbs;
  SearchConfig search;
  PruneConfig prune;
  Metric metric = Metric::euclidean;
};

struct DetectionReport {
  long n = 0;
  long dims = 0;  // 0 when detection ran on a precomputed distance matrix
  PipelineConfig config;
  CandidateSet candidates;
  EliminationTrace trace;
  std::vector<long> change_points;
  Dendrogram dendro;
  double wall_ms = 0.0;
};

// Stage 1 (candidate search) + stage 2 (backward elimination) + dendrogram.
inline DetectionReport run_pipeline(const DistanceMatrix& dist, long dims,
                                    const PipelineConfig& cfg, RngStream stream) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.search.validate();
  cfg.prune.validate();
  const long n = static_cast<long>(dist.size());
  if (n < cfg.search.min_len)
    throw ConfigError("sequence length " + std::to_string(n) +
                      " is shorter than min-len " + std::to_string(cfg.search.min_len));

  DetectionReport rep;
  rep.n = n;
  rep.dims = dims;
  rep.config = cfg;
  if (cfg.method == Method::wbs) {
    gwbs(dist, {1, n}, cfg.search, stream, rep.candidates);
  } else {
    const std::vector<Interval> seeds =
        seeded_intervals(n, cfg.search.gamma, cfg.search.min_len);
    gsbs(dist, {1, n}, cfg.search, seeds, stream, rep.candidates);
  }
  rep.trace = backward_eliminate(dist, rep.candidates.taus(), cfg.prune);
  rep.change_points = rep.trace.selected();
  rep.dendro = build_dendrogram(rep.trace, n);
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

inline DetectionReport detect(const DistanceMatrix& dist, const PipelineConfig& cfg,
                              long dims = 0) {
  return run_pipeline(dist, dims, cfg, RngStream{cfg.search.seed});
}

inline DetectionReport detect(const DataMatrix& data, const PipelineConfig& cfg) {
  return run_pipeline(pairwise_distances(data, cfg.metric),
                      static_cast<long>(data.cols()), cfg,
                      RngStream{cfg.search.seed});
}

// Canonical JSON form of a report. Timing is the one field that is not a pure
// function of (data, config, seed); leave it out for canonical comparison.
inline nlohmann::json report_to_json(const DetectionReport& rep,
                                     bool include_timing = true) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "detection";
  j["n"] = rep.n;
  j["dims"] = rep.dims;
  j["method"] = to_string(rep.config.method);
  j["config"] = {{"alpha", rep.config.search.alpha},
                 {"num_intervals", rep.config.search.num_intervals},
                 {"gamma", rep.config.search.gamma},
                 {"min_len", rep.config.search.min_len},
                 {"num_permutations", rep.config.search.num_permutations},
                 {"seed", rep.config.search.seed},
                 {"trim", rep.config.search.trim},
                 {"search_k_cap", rep.config.search.k_cap},
                 {"prune_k_cap", rep.config.prune.k_cap},
                 {"penalty_c", rep.config.prune.penalty_c},
                 {"metric", to_string(rep.config.metric)}};
  j["candidates"] = nlohmann::json::array();
  for (const Candidate& c : rep.candidates.entries())
    j["candidates"].push_back({{"tau", c.tau},
                               {"interval", {c.source.start, c.source.end}},
                               {"p_value", c.p_value},
                               {"s_max", c.s_max}});
  j["elimination"] = nlohmann::json::array();
  for (std::size_t l = rep.trace.steps.size(); l-- > 0;) {
    const EliminationStep& st = rep.trace.steps[l];
    nlohmann::json e{{"m", l}, {"points", st.points}, {"ep_bic", st.ep_bic}};
    e["removed"] = l > 0 ? nlohmann::json(st.removed) : nlohmann::json(nullptr);
    j["elimination"].push_back(std::move(e));
  }
  j["chosen_m"] = rep.trace.chosen_m;
  j["change_points"] = rep.change_points;
  j["dendrogram"] = dendrogram_to_json(rep.dendro);
  j["degenerate_windows"] = rep.trace.degenerate_windows;
  if (include_timing) j["timing"] = {{"wall_ms", rep.wall_ms}};
  return j;
}

// Structural validation of a serialized report (used on ingest round-trips).
inline void validate_report_json(const nlohmann::json& j) {
  const auto need = [&](const char* key) {
    if (!j.contains(key))
      throw InvalidData(std::string("report missing field: ") + key);
  };
  need("schema");
  if (j["schema"].get<int>() != 1)
    throw InvalidData("unsupported report schema version");
  for (const char* key : {"kind", "n", "method", "config", "candidates",
                          "elimination", "chosen_m", "change_points", "dendrogram"})
    need(key);
  if (j["kind"].get<std::string>() != "detection")
    throw InvalidData("not a detection report");
  if (!j["candidates"].is_array() || !j["elimination"].is_array() ||
      !j["change_points"].is_array())
    throw InvalidData("malformed report arrays");
  const auto chosen = j["chosen_m"].get<std::size_t>();
  for (const auto& e : j["elimination"])
    if (e.at("m").get<std::size_t>() == chosen &&
        e.at("points") != j["change_points"])
      throw InvalidData("change_points do not match the chosen elimination step");
}

}  // namespace gmulti
