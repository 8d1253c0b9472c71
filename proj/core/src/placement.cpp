#include "voidplace/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include "voidplace/errors.hpp"
#include "voidplace/parallel.hpp"

namespace voidplace {

MeanIntensityField::MeanIntensityField(Grid1D grid_in, Eigen::VectorXd lambda_bar_in)
    : grid(grid_in), lambda_bar(std::move(lambda_bar_in)) {
  if (lambda_bar.size() != grid.n_cells()) {
    throw std::invalid_argument("MeanIntensityField: length mismatch");
  }
  for (Eigen::Index i = 0; i < lambda_bar.size(); ++i) {
    if (!std::isfinite(lambda_bar[i]) || lambda_bar[i] < 0.0) {
      throw std::invalid_argument(
          "MeanIntensityField: entries must be finite and non-negative");
    }
  }
}

MeanIntensityField mean_intensity(const GaussianFieldPosterior& posterior,
                                  double horizon_ratio) {
  if (!(horizon_ratio > 0.0) || !std::isfinite(horizon_ratio)) {
    throw std::invalid_argument("mean_intensity: horizon_ratio must be > 0");
  }
  const int n = posterior.n_cells();
  const Eigen::VectorXd& m = posterior.mean();
  const Eigen::VectorXd& v = posterior.marginal_variance();
  Eigen::VectorXd lb(n);
  for (int i = 0; i < n; ++i) {
    lb[i] = horizon_ratio * std::exp(m[i] + 0.5 * v[i]);
    if (!std::isfinite(lb[i])) {
      throw std::overflow_error(
          "mean_intensity: exp overflow at cell " + std::to_string(i));
    }
  }
  return MeanIntensityField(posterior.grid(), std::move(lb));
}

double objective_F(const MeanIntensityField& field, const SensorParams& params,
                   const Placement& placement) {
  if (!(placement.grid() == field.grid)) {
    throw std::invalid_argument("objective_F: placement grid differs from field grid");
  }
  const Eigen::VectorXd miss = miss_prob_field(params, field.grid, placement);
  const double total = field.grid.integrate(field.lambda_bar);
  const double covered = field.grid.integrate(field.lambda_bar.cwiseProduct(miss));
  return total - covered;
}

namespace {

// Sorted unique candidate cells, validated against the grid.
std::vector<int> checked_candidates(const std::vector<int>& candidates,
                                    const Grid1D& grid, int n_sensors) {
  if (candidates.empty()) {
    throw std::invalid_argument("candidate set must be non-empty");
  }
  std::vector<int> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("candidate set contains duplicates");
  }
  if (sorted.front() < 0 || sorted.back() >= grid.n_cells()) {
    throw std::invalid_argument("candidate cell index out of range");
  }
  if (n_sensors < 0 || n_sensors > static_cast<int>(sorted.size())) {
    throw std::invalid_argument(
        "requested " + std::to_string(n_sensors) + " sensors from " +
        std::to_string(sorted.size()) + " candidates");
  }
  return sorted;
}

// detect_prob at every (cell, candidate) pair; column c is candidate c.
Eigen::MatrixXd gamma_table(const SensorParams& params, const Grid1D& grid,
                            const std::vector<int>& candidates) {
  const int n = grid.n_cells();
  const int nc = static_cast<int>(candidates.size());
  Eigen::MatrixXd g(n, nc);
  for (int c = 0; c < nc; ++c) {
    const double a = grid.cell_center(candidates[c]);
    for (int i = 0; i < n; ++i) {
      g(i, c) = detect_prob(params, grid.cell_center(i), a);
    }
  }
  return g;
}

// Marginal objective gain of one candidate given wp = lambda_bar .* miss.
double marginal_gain(const Eigen::VectorXd& wp, const double* gamma_col,
                     double spacing, std::vector<double>& buf) {
  const int n = static_cast<int>(wp.size());
  buf.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = wp[i] * gamma_col[i];
  return pairwise_sum(buf.data(), buf.size()) * spacing;
}

struct GreedyState {
  Eigen::VectorXd miss;
  Eigen::VectorXd wp;
  double total;
};

double committed_objective(const MeanIntensityField& field,
                           const GreedyState& state) {
  const double covered =
      field.grid.integrate(field.lambda_bar.cwiseProduct(state.miss));
  return state.total - covered;
}

}  // namespace

GreedyTrace greedy_place(const MeanIntensityField& field,
                         const SensorParams& params,
                         const std::vector<int>& candidates, int n_sensors,
                         int workers) {
  const Grid1D& grid = field.grid;
  const std::vector<int> cand = checked_candidates(candidates, grid, n_sensors);
  const int nc = static_cast<int>(cand.size());
  const Eigen::MatrixXd gamma = gamma_table(params, grid, cand);

  GreedyState state{Eigen::VectorXd::Ones(grid.n_cells()), {}, field.total()};
  GreedyTrace trace{Placement(grid), {}, {}};
  std::vector<char> used(static_cast<std::size_t>(nc), 0);
  Eigen::VectorXd gains(nc);

  for (int round = 0; round < n_sensors; ++round) {
    state.wp = field.lambda_bar.cwiseProduct(state.miss);
    parallel_for(static_cast<std::size_t>(nc), workers, [&](std::size_t c) {
      if (used[c]) {
        gains[static_cast<Eigen::Index>(c)] = -1.0;
        return;
      }
      thread_local std::vector<double> buf;
      gains[static_cast<Eigen::Index>(c)] =
          marginal_gain(state.wp, gamma.col(static_cast<Eigen::Index>(c)).data(),
                        grid.spacing_m(), buf);
    });

    int best = -1;
    double best_gain = -1.0;
    for (int c = 0; c < nc; ++c) {
      if (!used[static_cast<std::size_t>(c)] && gains[c] > best_gain) {
        best_gain = gains[c];
        best = c;
      }
    }

    used[static_cast<std::size_t>(best)] = 1;
    trace.chosen.add(cand[static_cast<std::size_t>(best)]);
    apply_sensor_to_miss_field(params, grid, cand[static_cast<std::size_t>(best)],
                               state.miss);
    trace.gains.push_back(best_gain);
    trace.objective_values.push_back(committed_objective(field, state));
  }
  return trace;
}

GreedyTrace lazy_greedy_place(const MeanIntensityField& field,
                              const SensorParams& params,
                              const std::vector<int>& candidates,
                              int n_sensors) {
  const Grid1D& grid = field.grid;
  const std::vector<int> cand = checked_candidates(candidates, grid, n_sensors);
  const int nc = static_cast<int>(cand.size());
  const Eigen::MatrixXd gamma = gamma_table(params, grid, cand);

  struct Entry {
    double gain;
    int cand_pos;
    int round;
  };
  // Max-heap on gain; equal gains surface the lowest cell index first so
  // tie-breaking matches the plain greedy scan.
  auto below = [&cand](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return cand[static_cast<std::size_t>(a.cand_pos)] >
           cand[static_cast<std::size_t>(b.cand_pos)];
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(below)> queue(below);

  GreedyState state{Eigen::VectorXd::Ones(grid.n_cells()), {}, field.total()};
  GreedyTrace trace{Placement(grid), {}, {}};
  std::vector<double> buf;

  state.wp = field.lambda_bar.cwiseProduct(state.miss);
  for (int c = 0; c < nc; ++c) {
    queue.push(Entry{marginal_gain(state.wp, gamma.col(c).data(),
                                   grid.spacing_m(), buf),
                     c, 0});
  }

  for (int round = 0; round < n_sensors; ++round) {
    while (true) {
      Entry top = queue.top();
      queue.pop();
      if (top.round == round) {
        trace.chosen.add(cand[static_cast<std::size_t>(top.cand_pos)]);
        apply_sensor_to_miss_field(
            params, grid, cand[static_cast<std::size_t>(top.cand_pos)], state.miss);
        state.wp = field.lambda_bar.cwiseProduct(state.miss);
        trace.gains.push_back(top.gain);
        trace.objective_values.push_back(committed_objective(field, state));
        break;
      }
      top.gain = marginal_gain(state.wp, gamma.col(top.cand_pos).data(),
                               grid.spacing_m(), buf);
      top.round = round;
      queue.push(top);
    }
  }
  return trace;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i);
    c /= static_cast<double>(i);
  }
  return c;
}

namespace {

struct BruteBest {
  double covered = std::numeric_limits<double>::infinity();
  std::vector<int> positions;
  bool valid = false;
};

struct BruteWorkspace {
  std::vector<Eigen::VectorXd> miss_levels;
  std::vector<double> leaf_buf;
};

// Depth-first over index tuples p < c_1 < ... maintaining the running miss
// field so each leaf costs O(n). Leaf arithmetic matches objective_F
// bit-for-bit: miss factors multiply in tuple order, then lambda_bar.
void brute_dfs(const Eigen::VectorXd& lambda_bar, const Eigen::MatrixXd& omg,
               double spacing, int depth, int first_pos, int n_sensors,
               BruteWorkspace& ws, std::vector<int>& current, BruteBest& best) {
  const int n = static_cast<int>(lambda_bar.size());
  const int nc = static_cast<int>(omg.cols());
  const Eigen::VectorXd& miss = ws.miss_levels[static_cast<std::size_t>(depth)];

  if (depth == n_sensors - 1) {
    ws.leaf_buf.resize(static_cast<std::size_t>(n));
    for (int c = first_pos; c < nc; ++c) {
      const double* omg_col = omg.col(c).data();
      for (int i = 0; i < n; ++i) {
        ws.leaf_buf[static_cast<std::size_t>(i)] =
            lambda_bar[i] * (miss[i] * omg_col[i]);
      }
      const double covered = pairwise_sum(ws.leaf_buf.data(), ws.leaf_buf.size()) * spacing;
      if (!best.valid || covered < best.covered) {
        best.covered = covered;
        best.valid = true;
        best.positions = current;
        best.positions.push_back(c);
      }
    }
    return;
  }

  Eigen::VectorXd& next = ws.miss_levels[static_cast<std::size_t>(depth + 1)];
  const int last_start = nc - (n_sensors - depth) + 1;
  for (int c = first_pos; c < last_start; ++c) {
    next = miss.cwiseProduct(omg.col(c));
    current.push_back(c);
    brute_dfs(lambda_bar, omg, spacing, depth + 1, c + 1, n_sensors, ws, current,
              best);
    current.pop_back();
  }
}

}  // namespace

Placement brute_force_place(const MeanIntensityField& field,
                            const SensorParams& params,
                            const std::vector<int>& candidates, int n_sensors,
                            double enumeration_cap, int workers) {
  const Grid1D& grid = field.grid;
  const std::vector<int> cand = checked_candidates(candidates, grid, n_sensors);
  const int nc = static_cast<int>(cand.size());

  if (n_sensors == 0) return Placement(grid);

  const double n_subsets = binomial(nc, n_sensors);
  if (n_subsets > enumeration_cap) {
    throw EnumerationCapError(
        "brute_force_place: " + std::to_string(n_subsets) +
            " subsets exceed the enumeration cap " +
            std::to_string(enumeration_cap),
        n_subsets, enumeration_cap);
  }

  const Eigen::MatrixXd gamma = gamma_table(params, grid, cand);
  const Eigen::MatrixXd omg = (1.0 - gamma.array()).matrix();

  // Partition on the first tuple element; merging in ascending order keeps
  // the lexicographic tie-break identical for every worker count.
  const int n_first = nc - n_sensors + 1;
  std::vector<BruteBest> per_first(static_cast<std::size_t>(n_first));
  parallel_for(static_cast<std::size_t>(n_first), workers, [&](std::size_t f) {
    thread_local BruteWorkspace ws;
    ws.miss_levels.assign(static_cast<std::size_t>(n_sensors),
                          Eigen::VectorXd());
    for (auto& level : ws.miss_levels) level.resize(grid.n_cells());
    ws.miss_levels[0].setOnes();

    std::vector<int> current;
    current.reserve(static_cast<std::size_t>(n_sensors));
    if (n_sensors == 1) {
      // One-element "tuples": evaluate exactly this candidate.
      ws.leaf_buf.resize(static_cast<std::size_t>(grid.n_cells()));
      const double* omg_col = omg.col(static_cast<Eigen::Index>(f)).data();
      for (int i = 0; i < grid.n_cells(); ++i) {
        ws.leaf_buf[static_cast<std::size_t>(i)] =
            field.lambda_bar[i] * (ws.miss_levels[0][i] * omg_col[i]);
      }
      per_first[f].covered =
          pairwise_sum(ws.leaf_buf.data(), ws.leaf_buf.size()) * grid.spacing_m();
      per_first[f].positions = {static_cast<int>(f)};
      per_first[f].valid = true;
      return;
    }
    ws.miss_levels[1] = ws.miss_levels[0].cwiseProduct(
        omg.col(static_cast<Eigen::Index>(f)));
    current.push_back(static_cast<int>(f));
    brute_dfs(field.lambda_bar, omg, grid.spacing_m(), 1,
              static_cast<int>(f) + 1, n_sensors, ws, current, per_first[f]);
  });

  BruteBest best;
  for (const auto& candidate_best : per_first) {
    if (candidate_best.valid &&
        (!best.valid || candidate_best.covered < best.covered)) {
      best = candidate_best;
    }
  }

  std::vector<int> cells;
  cells.reserve(best.positions.size());
  for (int pos : best.positions) cells.push_back(cand[static_cast<std::size_t>(pos)]);
  return Placement(grid, std::move(cells));
}

}  // namespace voidplace
