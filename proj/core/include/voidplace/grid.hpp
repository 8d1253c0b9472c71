#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace voidplace {

/// Fixed-order pairwise summation. The reduction tree depends only on the
/// length, so results are bit-identical no matter how the values were
/// produced (serial or parallel).
double pairwise_sum(const double* x, std::size_t n);

inline double pairwise_sum(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return pairwise_sum(x.data(), static_cast<std::size_t>(x.size()));
}

/// Uniform 1-D grid over a bounded segment. Cell centers are the candidate
/// sensor locations; integrals over the segment are midpoint sums.
class Grid1D {
 public:
  /// spacing must be positive and n_cells >= 1.
  Grid1D(double origin_m, double spacing_m, int n_cells);

  double origin_m() const { return origin_m_; }
  double spacing_m() const { return spacing_m_; }
  int n_cells() const { return n_cells_; }
  double length_m() const { return spacing_m_ * n_cells_; }

  /// Center of cell i, i.e. origin + (i + 0.5) * spacing.
  double cell_center(int i) const;

  /// All cell centers as a vector.
  Eigen::VectorXd cell_centers() const;

  /// Midpoint-rule integral of a per-cell integrand: sum(values) * spacing.
  double integrate(const Eigen::Ref<const Eigen::VectorXd>& values) const;

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.origin_m_ == b.origin_m_ && a.spacing_m_ == b.spacing_m_ &&
           a.n_cells_ == b.n_cells_;
  }

 private:
  double origin_m_;
  double spacing_m_;
  int n_cells_;
};

}  // namespace voidplace
