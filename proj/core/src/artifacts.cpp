#include "voidplace/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "voidplace/errors.hpp"

namespace voidplace {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  file << text;
  if (!file) throw std::runtime_error("write failed: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    file >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string join_cells(const std::vector<int>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out.push_back(';');
    out += std::to_string(cells[i]);
  }
  return out;
}

}  // namespace

json grid_to_json(const Grid1D& grid) {
  return json{{"origin_m", grid.origin_m()},
              {"spacing_m", grid.spacing_m()},
              {"n_cells", grid.n_cells()}};
}

Grid1D grid_from_json(const json& j) {
  return Grid1D(j.at("origin_m").get<double>(), j.at("spacing_m").get<double>(),
                j.at("n_cells").get<int>());
}

void write_counts_artifact(const std::string& path, const EventCounts& counts,
                           const json& provenance) {
  json j;
  j["kind"] = "voidplace.counts";
  j["grid"] = grid_to_json(counts.grid);
  j["counts"] = std::vector<int>(counts.counts.data(),
                                 counts.counts.data() + counts.counts.size());
  j["collection_span"] = counts.collection_span;
  j["provenance"] = provenance;
  write_json_file(path, j);
}

EventCounts read_counts_artifact(const std::string& path) {
  const json j = read_json_file(path);
  if (j.value("kind", std::string()) != "voidplace.counts") {
    throw std::runtime_error(path + " is not a counts artifact");
  }
  const Grid1D grid = grid_from_json(j.at("grid"));
  const auto raw = j.at("counts").get<std::vector<int>>();
  Eigen::VectorXi counts(static_cast<Eigen::Index>(raw.size()));
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    counts[i] = raw[static_cast<std::size_t>(i)];
  }
  return EventCounts(grid, std::move(counts), j.at("collection_span").get<double>());
}

void write_fit_artifact(const std::string& path, const RunConfig& config,
                        const LaplaceFitResult& fit) {
  const Eigen::MatrixXd cov = fit.posterior.covariance();
  const int n = fit.posterior.n_cells();

  std::vector<double> cov_row_major;
  cov_row_major.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cov_row_major.push_back(cov(i, j));
  }

  json j;
  j["kind"] = "voidplace.fit";
  j["config"] = config.to_json();
  j["grid"] = grid_to_json(fit.posterior.grid());
  j["posterior_mean"] = std::vector<double>(
      fit.posterior.mean().data(), fit.posterior.mean().data() + n);
  j["posterior_cov_row_major"] = cov_row_major;
  j["diagnostics"] = {{"iterations", fit.iterations},
                      {"final_step_max_norm", fit.final_step_max_norm},
                      {"final_grad_max_norm", fit.final_grad_max_norm},
                      {"prior_jitter_used", fit.prior_jitter_used},
                      {"log_posterior_trace", fit.log_posterior_trace}};
  write_json_file(path, j);
}

FitArtifact read_fit_artifact(const std::string& path) {
  const json j = read_json_file(path);
  if (j.value("kind", std::string()) != "voidplace.fit") {
    throw std::runtime_error(path + " is not a fit artifact");
  }
  const Grid1D grid = grid_from_json(j.at("grid"));
  const auto mean_raw = j.at("posterior_mean").get<std::vector<double>>();
  const auto cov_raw = j.at("posterior_cov_row_major").get<std::vector<double>>();
  const int n = grid.n_cells();
  if (static_cast<int>(mean_raw.size()) != n ||
      cov_raw.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::runtime_error(path + ": posterior dimensions disagree with grid");
  }
  Eigen::VectorXd mean(n);
  for (int i = 0; i < n; ++i) mean[i] = mean_raw[static_cast<std::size_t>(i)];
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      cov(i, k) = cov_raw[static_cast<std::size_t>(i) * n + k];
    }
  }
  return FitArtifact{
      GaussianFieldPosterior::from_covariance(grid, std::move(mean), cov),
      j.value("diagnostics", json::object()),
      j.value("config", json::object())};
}

namespace {

json trace_to_json(const Grid1D& grid, const GreedyTrace& trace) {
  std::vector<double> positions;
  positions.reserve(trace.chosen.cells().size());
  for (int c : trace.chosen.cells()) positions.push_back(grid.cell_center(c));
  return json{{"cells", trace.chosen.cells()},
              {"positions_m", positions},
              {"gains", trace.gains},
              {"objective_values", trace.objective_values}};
}

}  // namespace

void write_placement_report(const std::string& path, const RunConfig& config,
                            const GreedyTrace& greedy,
                            const std::optional<GreedyTrace>& lazy,
                            const std::optional<BruteSection>& brute) {
  const Grid1D& grid = greedy.chosen.grid();
  json j;
  j["kind"] = "voidplace.placement";
  j["config"] = config.to_json();
  j["grid"] = grid_to_json(grid);
  j["greedy"] = trace_to_json(grid, greedy);
  if (lazy) j["lazy"] = trace_to_json(grid, *lazy);
  if (brute) {
    std::vector<double> positions;
    for (int c : brute->cells) positions.push_back(grid.cell_center(c));
    j["brute"] = {{"cells", brute->cells},
                  {"positions_m", positions},
                  {"objective", brute->objective}};
  }
  write_json_file(path, j);
}

std::vector<int> read_placement_cells(const std::string& path) {
  const json j = read_json_file(path);
  if (j.value("kind", std::string()) != "voidplace.placement") {
    throw std::runtime_error(path + " is not a placement report");
  }
  return j.at("greedy").at("cells").get<std::vector<int>>();
}

void write_quantile_csv(const std::string& path, const Grid1D& grid,
                        const Eigen::VectorXd& q025, const Eigen::VectorXd& q500,
                        const Eigen::VectorXd& q975) {
  std::string out = "cell,center_m,q025,q500,q975\n";
  for (int i = 0; i < grid.n_cells(); ++i) {
    out += std::to_string(i);
    out.push_back(',');
    out += format_double(grid.cell_center(i));
    out.push_back(',');
    out += format_double(q025[i]);
    out.push_back(',');
    out += format_double(q500[i]);
    out.push_back(',');
    out += format_double(q975[i]);
    out.push_back('\n');
  }
  write_text_file(path, out);
}

void write_trace_csv(const std::string& path, const Grid1D& grid,
                     const GreedyTrace& trace) {
  std::string out = "step,cell,position_m,gain,objective\n";
  for (std::size_t k = 0; k < trace.gains.size(); ++k) {
    const int cell = trace.chosen.cells()[k];
    out += std::to_string(k + 1);
    out.push_back(',');
    out += std::to_string(cell);
    out.push_back(',');
    out += format_double(grid.cell_center(cell));
    out.push_back(',');
    out += format_double(trace.gains[k]);
    out.push_back(',');
    out += format_double(trace.objective_values[k]);
    out.push_back('\n');
  }
  write_text_file(path, out);
}

void write_evaluate_csv(const std::string& path,
                        const std::vector<VoidEstimate>& rows) {
  std::string out = "M,vp_mc,vp_se,lower_bound,gap,gap_bound,mu_u,sigma2_u\n";
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const VoidEstimate& est = rows[m];
    out += std::to_string(m);
    out.push_back(',');
    out += format_double(est.vp_mc);
    out.push_back(',');
    out += format_double(est.vp_se);
    out.push_back(',');
    out += format_double(est.lower_bound);
    out.push_back(',');
    out += format_double(est.gap);
    out.push_back(',');
    out += format_double(est.gap_bound);
    out.push_back(',');
    out += format_double(est.mu_u);
    out.push_back(',');
    out += format_double(est.sigma2_u);
    out.push_back('\n');
  }
  write_text_file(path, out);
}

void write_compare_csv(const std::string& path,
                       const std::vector<CompareRow>& rows) {
  std::string out =
      "M,status,greedy_cells,brute_cells,f_greedy,f_brute,"
      "vp_greedy,vp_greedy_se,vp_brute,vp_brute_se,vp_ratio_percent\n";
  for (const CompareRow& row : rows) {
    out += std::to_string(row.n_sensors);
    out.push_back(',');
    if (row.skipped) {
      out += "skipped (needs ";
      out += format_double(row.required_subsets);
      out += " subsets),,,,,,,,,\n";
      continue;
    }
    out += "ok,";
    out += join_cells(row.greedy_cells);
    out.push_back(',');
    out += join_cells(row.brute_cells);
    out.push_back(',');
    out += format_double(row.f_greedy);
    out.push_back(',');
    out += format_double(row.f_brute);
    out.push_back(',');
    out += format_double(row.vp_greedy.vp_mc);
    out.push_back(',');
    out += format_double(row.vp_greedy.vp_se);
    out.push_back(',');
    out += format_double(row.vp_brute.vp_mc);
    out.push_back(',');
    out += format_double(row.vp_brute.vp_se);
    out.push_back(',');
    out += format_double(100.0 * row.vp_greedy.vp_mc / row.vp_brute.vp_mc);
    out.push_back('\n');
  }
  write_text_file(path, out);
}

}  // namespace voidplace
