#pragma once

#include <Eigen/Core>
#include <vector>

#include "voidplace/grid.hpp"

namespace voidplace {

/// Detection-model constants: gamma(s, a) = rho * exp(-(a - s)^2 / sigma_l).
/// The exponent divides squared meters by sigma_l directly, so sigma_l is on
/// the squared-meters scale.
struct SensorParams {
  double rho;      ///< maximum detection probability, in [0, 1]
  double sigma_l;  ///< length-scale of the footprint, > 0

  SensorParams(double rho, double sigma_l);
};

/// Ordered, duplicate-free set of sensor cell indices on a grid. The order
/// records selection order; set semantics apply to all probabilities.
class Placement {
 public:
  explicit Placement(Grid1D grid) : grid_(grid) {}
  Placement(Grid1D grid, std::vector<int> cells);

  const Grid1D& grid() const { return grid_; }
  const std::vector<int>& cells() const { return cells_; }
  int size() const { return static_cast<int>(cells_.size()); }
  bool empty() const { return cells_.empty(); }
  bool contains(int cell) const;

  /// Appends a sensor cell; rejects duplicates and out-of-range indices.
  void add(int cell);

  /// First m sensors in selection order.
  Placement prefix(int m) const;

  /// Sensor positions in meters (cell centers).
  std::vector<double> positions_m() const;

 private:
  Grid1D grid_;
  std::vector<int> cells_;
};

/// Probability that a sensor at `a` detects a target at `s`.
double detect_prob(const SensorParams& params, double s, double a);

/// Probability that every sensor in the placement misses a target at `s`
/// (empty product = 1).
double miss_prob(const SensorParams& params, double s,
                 const Placement& placement);

/// miss_prob evaluated at every cell center.
Eigen::VectorXd miss_prob_field(const SensorParams& params, const Grid1D& grid,
                                const Placement& placement);

/// In-place update of a miss field for one added sensor at cell
/// `sensor_cell`: field[i] *= 1 - gamma(center_i, center_sensor). Equals
/// full recomputation bit-for-bit because miss_prob_field applies sensors
/// one at a time in the same order.
void apply_sensor_to_miss_field(const SensorParams& params, const Grid1D& grid,
                                int sensor_cell, Eigen::VectorXd& field);

}  // namespace voidplace
