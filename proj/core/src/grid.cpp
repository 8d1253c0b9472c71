#include "voidplace/grid.hpp"

#include <stdexcept>
#include <string>

namespace voidplace {

double pairwise_sum(const double* x, std::size_t n) {
  switch (n) {
    case 0: return 0.0;
    case 1: return x[0];
    case 2: return x[0] + x[1];
    case 3: return (x[0] + x[1]) + x[2];
    case 4: return (x[0] + x[1]) + (x[2] + x[3]);
    default: break;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

Grid1D::Grid1D(double origin_m, double spacing_m, int n_cells)
    : origin_m_(origin_m), spacing_m_(spacing_m), n_cells_(n_cells) {
  if (!(spacing_m > 0.0)) {
    throw std::invalid_argument("Grid1D: spacing must be positive, got " +
                                std::to_string(spacing_m));
  }
  if (n_cells < 1) {
    throw std::invalid_argument("Grid1D: n_cells must be >= 1, got " +
                                std::to_string(n_cells));
  }
}

double Grid1D::cell_center(int i) const {
  if (i < 0 || i >= n_cells_) {
    throw std::out_of_range("Grid1D::cell_center: index " + std::to_string(i) +
                            " outside [0, " + std::to_string(n_cells_) + ")");
  }
  return origin_m_ + (i + 0.5) * spacing_m_;
}

Eigen::VectorXd Grid1D::cell_centers() const {
  Eigen::VectorXd c(n_cells_);
  for (int i = 0; i < n_cells_; ++i) c[i] = origin_m_ + (i + 0.5) * spacing_m_;
  return c;
}

double Grid1D::integrate(const Eigen::Ref<const Eigen::VectorXd>& values) const {
  if (values.size() != n_cells_) {
    throw std::invalid_argument(
        "Grid1D::integrate: expected " + std::to_string(n_cells_) +
        " values, got " + std::to_string(values.size()));
  }
  return pairwise_sum(values) * spacing_m_;
}

}  // namespace voidplace
