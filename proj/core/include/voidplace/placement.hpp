#pragma once

#include <Eigen/Core>
#include <vector>

#include "voidplace/gp.hpp"
#include "voidplace/grid.hpp"
#include "voidplace/sensor_model.hpp"

namespace voidplace {

/// Posterior-mean scaled intensity: lambda_bar(s) = E[(T/T_c) lambda(s)],
/// in expected targets per meter over the prediction horizon.
struct MeanIntensityField {
  Grid1D grid;
  Eigen::VectorXd lambda_bar;

  MeanIntensityField(Grid1D grid, Eigen::VectorXd lambda_bar);

  /// Midpoint integral of lambda_bar over the segment (expected targets).
  double total() const { return grid.integrate(lambda_bar); }
};

/// lambda_bar_i = horizon_ratio * exp(m_i + Sigma_ii / 2), the lognormal mean
/// of exp(f_i) scaled by the prediction horizon. Throws on exp overflow,
/// naming the offending cell.
MeanIntensityField mean_intensity(const GaussianFieldPosterior& posterior,
                                  double horizon_ratio);

/// Coverage objective: integral of lambda_bar minus the integral of
/// lambda_bar times the miss probability. Non-negative, monotone, and
/// submodular over placements on the candidate set.
double objective_F(const MeanIntensityField& field, const SensorParams& params,
                   const Placement& placement);

/// Per-step record of a greedy run. gains[k] is the marginal objective gain
/// of step k; objective_values[k] equals objective_F of the (k+1)-prefix
/// bit-for-bit.
struct GreedyTrace {
  Placement chosen;
  std::vector<double> gains;
  std::vector<double> objective_values;
};

/// Greedy maximization of the coverage objective over the candidate cells.
/// Ties break to the lowest cell index. Gains within a round may be
/// evaluated concurrently; the selection scan is sequential, so output is
/// identical for every worker count.
GreedyTrace greedy_place(const MeanIntensityField& field,
                         const SensorParams& params,
                         const std::vector<int>& candidates, int n_sensors,
                         int workers = 1);

/// Accelerated greedy using stale-gain priority ordering. Produces the same
/// placement, gains, and objective values as greedy_place on every instance.
GreedyTrace lazy_greedy_place(const MeanIntensityField& field,
                              const SensorParams& params,
                              const std::vector<int>& candidates,
                              int n_sensors);

/// Exhaustive search over all n_sensors-subsets of the candidates; ties
/// break to the lexicographically smallest index tuple. Throws
/// EnumerationCapError when C(|candidates|, n_sensors) exceeds the cap.
Placement brute_force_place(const MeanIntensityField& field,
                            const SensorParams& params,
                            const std::vector<int>& candidates, int n_sensors,
                            double enumeration_cap = 5e6, int workers = 1);

/// C(n, k) in double precision (exact for all values relevant to cap checks).
double binomial(int n, int k);

}  // namespace voidplace
