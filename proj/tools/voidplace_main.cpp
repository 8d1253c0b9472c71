// Command-line pipeline: simulate -> fit -> place -> evaluate / compare.
// Every command is a pure function of (config, input artifacts, seed); the
// only non-deterministic output is the compare timing sidecar.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "voidplace/artifacts.hpp"
#include "voidplace/config.hpp"
#include "voidplace/errors.hpp"
#include "voidplace/gp.hpp"
#include "voidplace/ingest.hpp"
#include "voidplace/lgcp_fit.hpp"
#include "voidplace/placement.hpp"
#include "voidplace/void_eval.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace voidplace;

constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitEnumerationCap = 4;
constexpr int kExitRuntime = 5;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

RunConfig load_config(const CommonOptions& opts) {
  RunConfig config = RunConfig::load(opts.config_path);
  if (opts.out_dir) config.out_dir = *opts.out_dir;
  if (opts.seed) config.seed = *opts.seed;
  if (opts.workers) {
    if (*opts.workers < 1) throw ConfigError("--workers must be >= 1");
    config.workers = *opts.workers;
  }
  config.required_seed();  // every command runs from an explicit seed
  fs::create_directories(config.out_dir);
  return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  return (fs::path(config.out_dir) / name).string();
}

std::vector<int> all_cells(const Grid1D& grid) {
  std::vector<int> cells(static_cast<std::size_t>(grid.n_cells()));
  for (int i = 0; i < grid.n_cells(); ++i) cells[static_cast<std::size_t>(i)] = i;
  return cells;
}

FitArtifact load_fit(const RunConfig& config, const std::string& path) {
  FitArtifact artifact = read_fit_artifact(path);
  if (!(artifact.posterior.grid() == config.grid)) {
    throw ConfigError("fit artifact grid differs from the config grid");
  }
  return artifact;
}

int cmd_simulate(const CommonOptions& opts) {
  const RunConfig config = load_config(opts);
  if (!config.synthetic) {
    throw ConfigError("simulate needs a \"synthetic\" section in the config");
  }
  const std::uint64_t seed = config.required_seed();
  const Eigen::VectorXd log_field = config.synthetic->log_field(config.grid);
  const EventCounts counts = synth_generate(log_field, config.grid, seed);

  write_counts_artifact(out_path(config, "counts.json"), counts,
                        json{{"source", "synthetic"}, {"seed", seed}});
  json truth;
  truth["kind"] = "voidplace.true_field";
  truth["grid"] = grid_to_json(config.grid);
  truth["log_field"] = std::vector<double>(
      log_field.data(), log_field.data() + log_field.size());
  {
    std::ofstream file(out_path(config, "true_field.json"), std::ios::binary);
    file << truth.dump(2) << "\n";
  }
  std::cout << "wrote " << out_path(config, "counts.json") << "\n";
  return 0;
}

int cmd_fit(const CommonOptions& opts, const std::string& counts_path,
            const std::string& events_path, int max_iterations) {
  const RunConfig config = load_config(opts);

  std::optional<EventCounts> counts;
  if (!counts_path.empty()) {
    counts = read_counts_artifact(counts_path);
    if (!(counts->grid == config.grid)) {
      throw ConfigError("counts artifact grid differs from the config grid");
    }
  } else if (!events_path.empty()) {
    if (!config.segment) {
      throw ConfigError("fitting from events needs a \"segment\" section");
    }
    const LoadResult loaded = load_events(events_path, *config.segment);
    const BinResult binned =
        bin_events(loaded.records, *config.segment, config.grid, config.dedupe);
    write_counts_artifact(
        out_path(config, "counts.json"), binned.counts,
        json{{"source", "events"},
             {"events_csv", events_path},
             {"window",
              {{"start", format_utc_timestamp(config.segment->window_start_utc)},
               {"end", format_utc_timestamp(config.segment->window_end_utc)}}},
             {"loaded", loaded.records.size()},
             {"skipped_malformed", loaded.skipped_malformed},
             {"filtered_out", loaded.filtered_out},
             {"out_of_range", binned.out_of_range},
             {"dedupe", dedupe_to_string(config.dedupe)}});
    counts = binned.counts;
  } else {
    throw ConfigError("fit needs --counts or --events");
  }

  const LaplaceFitResult fit = laplace_fit(*counts, config.prior_mean,
                                           config.matern, config.jitter,
                                           max_iterations);
  write_fit_artifact(out_path(config, "fit.json"), config, fit);
  write_quantile_csv(out_path(config, "quantiles.csv"), config.grid,
                     posterior_quantiles(fit.posterior, 0.025),
                     posterior_quantiles(fit.posterior, 0.5),
                     posterior_quantiles(fit.posterior, 0.975));
  std::cout << "wrote " << out_path(config, "fit.json") << " ("
            << fit.iterations << " Newton iterations)\n";
  return 0;
}

int cmd_place(const CommonOptions& opts, const std::string& fit_path,
              int n_sensors, bool with_lazy, bool with_brute) {
  const RunConfig config = load_config(opts);
  const FitArtifact artifact = load_fit(config, fit_path);
  const MeanIntensityField field =
      mean_intensity(artifact.posterior, config.horizon_ratio);
  const std::vector<int> candidates = all_cells(config.grid);

  const GreedyTrace greedy =
      greedy_place(field, config.sensor, candidates, n_sensors, config.workers);
  std::optional<GreedyTrace> lazy;
  if (with_lazy) {
    lazy = lazy_greedy_place(field, config.sensor, candidates, n_sensors);
  }
  std::optional<BruteSection> brute;
  if (with_brute) {
    const Placement best =
        brute_force_place(field, config.sensor, candidates, n_sensors,
                          config.enumeration_cap, config.workers);
    brute = BruteSection{best.cells(), objective_F(field, config.sensor, best)};
  }

  write_placement_report(out_path(config, "placement.json"), config, greedy,
                         lazy, brute);
  write_trace_csv(out_path(config, "trace.csv"), config.grid, greedy);
  std::cout << "wrote " << out_path(config, "placement.json") << "\n";
  return 0;
}

int cmd_evaluate(const CommonOptions& opts, const std::string& fit_path,
                 const std::string& placement_path, std::optional<int> m_max) {
  const RunConfig config = load_config(opts);
  const FitArtifact artifact = load_fit(config, fit_path);
  const MeanIntensityField field =
      mean_intensity(artifact.posterior, config.horizon_ratio);
  const Placement placement(config.grid, read_placement_cells(placement_path));

  int limit = m_max.value_or(config.m_max);
  if (limit > placement.size()) limit = placement.size();

  const IntensitySampleSet samples = IntensitySampleSet::generate(
      artifact.posterior, config.horizon_ratio, config.n_intensity_samples,
      config.required_seed(), config.workers);
  const std::vector<VoidEstimate> rows = evaluate_prefixes(
      samples, field, config.sensor, placement, limit, config.workers);

  write_evaluate_csv(out_path(config, "evaluate.csv"), rows);
  std::cout << "wrote " << out_path(config, "evaluate.csv") << "\n";
  return 0;
}

std::vector<int> parse_m_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bad --m-list entry \"" + item + "\"");
    }
    if (out.back() < 0) throw ConfigError("--m-list entries must be >= 0");
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("--m-list is empty");
  return out;
}

int cmd_compare(const CommonOptions& opts, const std::string& fit_path,
                const std::string& m_list_text) {
  using clock = std::chrono::steady_clock;
  const RunConfig config = load_config(opts);
  const FitArtifact artifact = load_fit(config, fit_path);
  const MeanIntensityField field =
      mean_intensity(artifact.posterior, config.horizon_ratio);
  const std::vector<int> candidates = all_cells(config.grid);
  const std::vector<int> m_list = parse_m_list(m_list_text);

  int m_top = 0;
  for (int m : m_list) m_top = std::max(m_top, m);
  if (m_top > config.grid.n_cells()) {
    throw ConfigError("--m-list exceeds the number of candidate cells");
  }

  const IntensitySampleSet samples = IntensitySampleSet::generate(
      artifact.posterior, config.horizon_ratio, config.n_intensity_samples,
      config.required_seed(), config.workers);

  const auto greedy_start = clock::now();
  const GreedyTrace greedy =
      greedy_place(field, config.sensor, candidates, m_top, config.workers);
  const double greedy_seconds =
      std::chrono::duration<double>(clock::now() - greedy_start).count();

  std::vector<CompareRow> rows;
  json timing;
  timing["greedy_seconds_total"] = greedy_seconds;
  json per_m = json::array();

  for (int m : m_list) {
    CompareRow row;
    row.n_sensors = m;
    row.greedy_cells = greedy.chosen.prefix(m).cells();
    const Placement greedy_prefix(config.grid, row.greedy_cells);

    json timing_row{{"M", m}};
    try {
      const auto brute_start = clock::now();
      const Placement brute =
          brute_force_place(field, config.sensor, candidates, m,
                            config.enumeration_cap, config.workers);
      timing_row["brute_seconds"] =
          std::chrono::duration<double>(clock::now() - brute_start).count();

      row.brute_cells = brute.cells();
      row.f_greedy = objective_F(field, config.sensor, greedy_prefix);
      row.f_brute = objective_F(field, config.sensor, brute);

      const auto vp_start = clock::now();
      row.vp_greedy = evaluate_placement(samples, field, config.sensor,
                                         greedy_prefix, config.workers);
      row.vp_brute =
          evaluate_placement(samples, field, config.sensor, brute, config.workers);
      timing_row["vp_seconds"] =
          std::chrono::duration<double>(clock::now() - vp_start).count();
    } catch (const EnumerationCapError& e) {
      row.skipped = true;
      row.required_subsets = e.required();
    }
    rows.push_back(std::move(row));
    per_m.push_back(std::move(timing_row));
  }
  timing["per_m"] = per_m;

  write_compare_csv(out_path(config, "compare.csv"), rows);
  {
    std::ofstream file(out_path(config, "compare_timing.json"),
                       std::ios::binary);
    file << timing.dump(2) << "\n";
  }
  std::cout << "wrote " << out_path(config, "compare.csv") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensor placement under an uncertain target-arrival intensity"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "run configuration JSON")
        ->required();
    sub->add_option("--out-dir", [&common](const std::vector<std::string>& v) {
      common.out_dir = v.back();
      return true;
    }, "output directory (overrides config)");
    sub->add_option("--seed", [&common](const std::vector<std::string>& v) {
      try {
        common.seed = std::stoull(v.back());
      } catch (const std::exception&) {
        return false;
      }
      return true;
    }, "master seed (overrides config)");
    sub->add_option("--workers", [&common](const std::vector<std::string>& v) {
      try {
        common.workers = std::stoi(v.back());
      } catch (const std::exception&) {
        return false;
      }
      return true;
    }, "worker threads (overrides config); results do not depend on it");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic counts");
  add_common(simulate);

  CLI::App* fit = app.add_subcommand("fit", "estimate the log-intensity posterior");
  add_common(fit);
  std::string counts_path, events_path;
  int max_iterations = 100;
  fit->add_option("--counts", counts_path, "counts artifact JSON");
  fit->add_option("--events", events_path, "AIS-schema events CSV");
  fit->add_option("--max-iter", max_iterations, "Newton iteration budget")
      ->capture_default_str();

  CLI::App* place = app.add_subcommand("place", "select sensor locations");
  add_common(place);
  std::string fit_path;
  int n_sensors = 0;
  bool with_lazy = false, with_brute = false;
  place->add_option("--fit", fit_path, "fit artifact JSON")->required();
  place->add_option("-M,--sensors", n_sensors, "number of sensors")->required();
  place->add_flag("--lazy", with_lazy, "also run lazy greedy");
  place->add_flag("--brute", with_brute, "also run brute force");

  CLI::App* evaluate = app.add_subcommand("evaluate", "void probability per prefix");
  add_common(evaluate);
  std::string eval_fit_path, placement_path;
  std::optional<int> m_max;
  evaluate->add_option("--fit", eval_fit_path, "fit artifact JSON")->required();
  evaluate->add_option("--placement", placement_path, "placement report JSON")
      ->required();
  evaluate->add_option("--m-max", [&m_max](const std::vector<std::string>& v) {
    try {
      m_max = std::stoi(v.back());
    } catch (const std::exception&) {
      return false;
    }
    return true;
  }, "largest prefix to evaluate");

  CLI::App* compare = app.add_subcommand("compare", "greedy vs brute force");
  add_common(compare);
  std::string cmp_fit_path, m_list_text;
  compare->add_option("--fit", cmp_fit_path, "fit artifact JSON")->required();
  compare->add_option("--m-list", m_list_text, "comma-separated sensor counts")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(common);
    if (fit->parsed()) return cmd_fit(common, counts_path, events_path, max_iterations);
    if (place->parsed()) return cmd_place(common, fit_path, n_sensors, with_lazy, with_brute);
    if (evaluate->parsed()) return cmd_evaluate(common, eval_fit_path, placement_path, m_max);
    if (compare->parsed()) return cmd_compare(common, cmp_fit_path, m_list_text);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "fit did not converge: " << e.what() << "\n";
    std::cerr << "step-norm trace:";
    for (double s : e.step_norms()) std::cerr << " " << s;
    std::cerr << "\n";
    return kExitNoConvergence;
  } catch (const EnumerationCapError& e) {
    std::cerr << "enumeration cap exceeded: " << e.what() << "\n";
    return kExitEnumerationCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
