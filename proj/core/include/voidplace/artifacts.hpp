#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "voidplace/config.hpp"
#include "voidplace/gp.hpp"
#include "voidplace/lgcp_fit.hpp"
#include "voidplace/placement.hpp"
#include "voidplace/void_eval.hpp"

namespace voidplace {

/// Shortest round-trip decimal text for a double (used by every CSV writer
/// so reruns are byte-identical).
std::string format_double(double value);

nlohmann::json grid_to_json(const Grid1D& grid);
Grid1D grid_from_json(const nlohmann::json& j);

// --- counts artifact -------------------------------------------------------

/// {kind, grid, counts, collection_span, provenance...}
void write_counts_artifact(const std::string& path, const EventCounts& counts,
                           const nlohmann::json& provenance);
EventCounts read_counts_artifact(const std::string& path);

// --- fit artifact ----------------------------------------------------------

struct FitArtifact {
  GaussianFieldPosterior posterior;
  nlohmann::json diagnostics;
  nlohmann::json config_echo;
};

void write_fit_artifact(const std::string& path, const RunConfig& config,
                        const LaplaceFitResult& fit);
FitArtifact read_fit_artifact(const std::string& path);

// --- placement report ------------------------------------------------------

struct BruteSection {
  std::vector<int> cells;
  double objective;
};

void write_placement_report(const std::string& path, const RunConfig& config,
                            const GreedyTrace& greedy,
                            const std::optional<GreedyTrace>& lazy,
                            const std::optional<BruteSection>& brute);

/// Ordered greedy cells (what evaluate consumes), validated against a grid.
std::vector<int> read_placement_cells(const std::string& path);

// --- CSV reports -----------------------------------------------------------

void write_quantile_csv(const std::string& path, const Grid1D& grid,
                        const Eigen::VectorXd& q025, const Eigen::VectorXd& q500,
                        const Eigen::VectorXd& q975);

void write_trace_csv(const std::string& path, const Grid1D& grid,
                     const GreedyTrace& trace);

void write_evaluate_csv(const std::string& path,
                        const std::vector<VoidEstimate>& rows);

struct CompareRow {
  int n_sensors = 0;
  bool skipped = false;
  double required_subsets = 0.0;  ///< filled when skipped
  std::vector<int> greedy_cells;
  std::vector<int> brute_cells;
  double f_greedy = 0.0;
  double f_brute = 0.0;
  VoidEstimate vp_greedy;
  VoidEstimate vp_brute;
};

void write_compare_csv(const std::string& path,
                       const std::vector<CompareRow>& rows);

}  // namespace voidplace
