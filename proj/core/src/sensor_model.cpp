#include "voidplace/sensor_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace voidplace {

SensorParams::SensorParams(double rho, double sigma_l)
    : rho(rho), sigma_l(sigma_l) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("SensorParams: rho must be in [0, 1], got " +
                                std::to_string(rho));
  }
  if (!(sigma_l > 0.0)) {
    throw std::invalid_argument("SensorParams: sigma_l must be positive, got " +
                                std::to_string(sigma_l));
  }
}

Placement::Placement(Grid1D grid, std::vector<int> cells)
    : grid_(grid), cells_(std::move(cells)) {
  std::vector<int> sorted = cells_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("Placement: duplicate cell index");
  }
  for (int c : cells_) {
    if (c < 0 || c >= grid_.n_cells()) {
      throw std::invalid_argument("Placement: cell index " + std::to_string(c) +
                                  " outside [0, " +
                                  std::to_string(grid_.n_cells()) + ")");
    }
  }
}

bool Placement::contains(int cell) const {
  return std::find(cells_.begin(), cells_.end(), cell) != cells_.end();
}

void Placement::add(int cell) {
  if (cell < 0 || cell >= grid_.n_cells()) {
    throw std::invalid_argument("Placement::add: cell index out of range");
  }
  if (contains(cell)) {
    throw std::invalid_argument("Placement::add: duplicate cell index " +
                                std::to_string(cell));
  }
  cells_.push_back(cell);
}

Placement Placement::prefix(int m) const {
  if (m < 0 || m > size()) {
    throw std::invalid_argument("Placement::prefix: length out of range");
  }
  return Placement(grid_, std::vector<int>(cells_.begin(), cells_.begin() + m));
}

std::vector<double> Placement::positions_m() const {
  std::vector<double> pos;
  pos.reserve(cells_.size());
  for (int c : cells_) pos.push_back(grid_.cell_center(c));
  return pos;
}

double detect_prob(const SensorParams& params, double s, double a) {
  const double d = a - s;
  return params.rho * std::exp(-(d * d) / params.sigma_l);
}

double miss_prob(const SensorParams& params, double s,
                 const Placement& placement) {
  double p = 1.0;
  for (int c : placement.cells()) {
    p *= 1.0 - detect_prob(params, s, placement.grid().cell_center(c));
  }
  return p;
}

Eigen::VectorXd miss_prob_field(const SensorParams& params, const Grid1D& grid,
                                const Placement& placement) {
  Eigen::VectorXd field = Eigen::VectorXd::Ones(grid.n_cells());
  for (int c : placement.cells()) {
    apply_sensor_to_miss_field(params, grid, c, field);
  }
  return field;
}

void apply_sensor_to_miss_field(const SensorParams& params, const Grid1D& grid,
                                int sensor_cell, Eigen::VectorXd& field) {
  const double a = grid.cell_center(sensor_cell);
  const int n = grid.n_cells();
  for (int i = 0; i < n; ++i) {
    field[i] *= 1.0 - detect_prob(params, grid.cell_center(i), a);
  }
}

}  // namespace voidplace
