#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gmulti/gmulti.hpp"

namespace {

// Exit codes: 0 success, 2 input/output problems, 3 configuration problems,
// 1 anything else.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

struct CommonOpts {
  double alpha = 0.01;
  long intervals = 100;
  double gamma = 0.70710678118654752;
  long min_len = 10;
  long permutations = 999;
  std::uint64_t seed = 0;
  double trim = 0.1;
  unsigned search_cap = 30;
  unsigned prune_cap = 5;
  double penalty = 2.0;
  std::string method = "wbs";
  std::string metric = "euclidean";
  bool no_timing = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--alpha", o.alpha, "Per-interval significance level")
      ->capture_default_str();
  cmd->add_option("-L,--intervals", o.intervals,
                  "Random intervals per recursion level (wbs)")
      ->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "Seeded-interval decay in (0, 1) (sbs)")
      ->capture_default_str();
  cmd->add_option("--min-len", o.min_len, "Minimum interval length")
      ->capture_default_str();
  cmd->add_option("-B,--permutations", o.permutations,
                  "Monte Carlo permutation replicates per interval")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed (wbs runs are reproducible per seed)")
      ->capture_default_str();
  cmd->add_option("--trim", o.trim, "Scan trimming fraction in [0, 0.5)")
      ->capture_default_str();
  cmd->add_option("--search-cap", o.search_cap, "Graph multiplicity cap while searching")
      ->capture_default_str();
  cmd->add_option("--prune-cap", o.prune_cap, "Graph multiplicity cap while pruning")
      ->capture_default_str();
  cmd->add_option("-c,--penalty", o.penalty, "Model-complexity penalty coefficient")
      ->capture_default_str();
  cmd->add_option("--method", o.method, "Search strategy: wbs or sbs")
      ->capture_default_str();
  cmd->add_option("--metric", o.metric, "Distance: euclidean, manhattan, or hamming")
      ->capture_default_str();
  cmd->add_flag("--no-timing", o.no_timing,
                "Omit the timing block (canonical, byte-reproducible output)");
}

gmulti::PipelineConfig pipeline_config(const CommonOpts& o) {
  gmulti::PipelineConfig cfg;
  cfg.method = gmulti::method_from_string(o.method);
  cfg.metric = gmulti::metric_from_string(o.metric);
  cfg.search.alpha = o.alpha;
  cfg.search.num_intervals = o.intervals;
  cfg.search.gamma = o.gamma;
  cfg.search.min_len = o.min_len;
  cfg.search.num_permutations = o.permutations;
  cfg.search.seed = o.seed;
  cfg.search.trim = o.trim;
  cfg.search.k_cap = o.search_cap;
  cfg.prune.k_cap = o.prune_cap;
  cfg.prune.penalty_c = o.penalty;
  cfg.prune.trim = o.trim;
  cfg.search.validate();
  cfg.prune.validate();
  return cfg;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fputs(content.c_str(), stdout);
    return;
  }
  gmulti::write_text_file(path, content);
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void run_detect(const std::string& input, const std::string& format,
                const CommonOpts& opts, const std::string& output,
                const std::string& svg) {
  const gmulti::PipelineConfig cfg = pipeline_config(opts);
  gmulti::DetectionReport rep;
  if (format == "csv_matrix") {
    rep = gmulti::detect(gmulti::read_csv_matrix(input), cfg);
  } else if (format == "csv_distance") {
    rep = gmulti::detect(gmulti::read_csv_distance(input), cfg);
  } else {
    throw gmulti::ConfigError("unknown format: " + format);
  }
  write_output(output, json_text(gmulti::report_to_json(rep, !opts.no_timing)));
  if (!svg.empty()) gmulti::write_text_file(svg, gmulti::dendrogram_to_svg(rep.dendro));
}

void run_benchmark(const std::string& models_arg, long dim, long nodes, long reps,
                   double delta, double sigma, const CommonOpts& opts,
                   const std::string& output, const std::string& json_path) {
  std::vector<gmulti::ModelSpec> models;
  std::string token;
  std::istringstream in(models_arg);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    char* end = nullptr;
    const long id = std::strtol(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || id < 1 || id > 9)
      throw gmulti::ConfigError("bad model id: " + token);
    gmulti::ModelSpec spec;
    spec.model_id = static_cast<int>(id);
    spec.dimension = id == 9 ? nodes : dim;
    spec.delta = delta;
    spec.sigma = sigma;
    models.push_back(spec);
  }
  if (models.empty()) throw gmulti::ConfigError("no model ids given");
  const gmulti::PipelineConfig base = pipeline_config(opts);
  const gmulti::BenchmarkReport rep = gmulti::run_benchmark(
      models, base.method, reps, opts.seed, base);
  write_output(output, gmulti::benchmark_to_csv(rep));
  if (!json_path.empty())
    gmulti::write_text_file(json_path,
                            json_text(gmulti::benchmark_to_json(rep, !opts.no_timing)));
}

void run_dendrogram(const std::string& input, const std::string& svg,
                    const std::string& json_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(gmulti::detail::read_file(input));
  } catch (const nlohmann::json::parse_error& e) {
    throw gmulti::InvalidData(input + ": not valid JSON: " + e.what());
  }
  gmulti::validate_report_json(j);
  const gmulti::Dendrogram d = gmulti::dendrogram_from_json(j.at("dendrogram"));
  const std::string tree = json_text(gmulti::dendrogram_to_json(d));
  if (svg.empty() && json_path.empty()) {
    std::fputs(gmulti::dendrogram_to_svg(d).c_str(), stdout);
    return;
  }
  if (!svg.empty()) {
    gmulti::write_text_file(svg, gmulti::dendrogram_to_svg(d));
    gmulti::write_text_file(json_path.empty() ? svg + ".json" : json_path, tree);
  } else {
    gmulti::write_text_file(json_path, tree);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based multiple change-point detection"};
  app.require_subcommand(1);

  // --- detect ---------------------------------------------------------------
  auto* detect_cmd =
      app.add_subcommand("detect", "Detect change-points in a CSV sequence");
  std::string d_input, d_format = "csv_matrix", d_output = "-", d_svg;
  CommonOpts d_opts;
  detect_cmd->add_option("input", d_input, "Input CSV path")->required();
  detect_cmd->add_option("--format", d_format, "Input kind: csv_matrix or csv_distance")
      ->capture_default_str();
  detect_cmd->add_option("-o,--output", d_output, "Report JSON path ('-' = stdout)")
      ->capture_default_str();
  detect_cmd->add_option("--svg", d_svg, "Also write the dendrogram as SVG here");
  add_common_flags(detect_cmd, d_opts);
  detect_cmd->callback([&] { run_detect(d_input, d_format, d_opts, d_output, d_svg); });

  // --- benchmark ------------------------------------------------------------
  auto* bench_cmd =
      app.add_subcommand("benchmark", "Run synthetic model benchmarks");
  std::string b_models, b_output = "-", b_json;
  long b_dim = 100, b_nodes = 50, b_reps = 10;
  double b_delta = std::numeric_limits<double>::quiet_NaN();
  double b_sigma = std::numeric_limits<double>::quiet_NaN();
  CommonOpts b_opts;
  bench_cmd->add_option("--models", b_models, "Comma-separated model ids (1-9)")
      ->required();
  bench_cmd->add_option("--dim", b_dim, "Dimension for models 1-8")
      ->capture_default_str();
  bench_cmd->add_option("--nodes", b_nodes, "Node count for model 9")
      ->capture_default_str();
  bench_cmd->add_option("--reps", b_reps, "Replicates per model")->capture_default_str();
  bench_cmd->add_option("--delta", b_delta, "Override the tabulated signal strength");
  bench_cmd->add_option("--sigma", b_sigma, "Override the tabulated scale factor");
  bench_cmd->add_option("-o,--output", b_output, "Results CSV path ('-' = stdout)")
      ->capture_default_str();
  bench_cmd->add_option("--json", b_json, "Also write the results as JSON here");
  add_common_flags(bench_cmd, b_opts);
  bench_cmd->callback([&] {
    run_benchmark(b_models, b_dim, b_nodes, b_reps, b_delta, b_sigma, b_opts, b_output,
                  b_json);
  });

  // --- dendrogram -----------------------------------------------------------
  auto* dendro_cmd = app.add_subcommand(
      "dendrogram", "Re-emit the dendrogram of a detection report");
  std::string t_input, t_svg, t_json;
  dendro_cmd->add_option("input", t_input, "Detection report JSON path")->required();
  dendro_cmd->add_option("--svg", t_svg,
                         "SVG output path (writes the JSON tree alongside)");
  dendro_cmd->add_option("--json", t_json, "JSON tree output path");
  dendro_cmd->callback([&] { run_dendrogram(t_input, t_svg, t_json); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const gmulti::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const gmulti::InvalidData& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const gmulti::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const gmulti::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
  return kExitOk;
}
