#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "voidplace/grid.hpp"

namespace voidplace {

/// Matern covariance hyperparameters on the log-intensity scale.
/// kappa is always derived from (zeta, beta_m), never stored.
struct MaternParams {
  double sigma2;   ///< marginal variance, > 0
  double zeta;     ///< smoothness, > 0
  double beta_m;   ///< spatial range in meters, > 0

  MaternParams(double sigma2, double zeta, double beta_m);

  double kappa() const;
};

/// k(r) = sigma2 * 2^{1-zeta}/Gamma(zeta) * (kappa r)^zeta * K_zeta(kappa r),
/// with the exact limit sigma2 at r = 0. zeta = 3/2 takes the closed form
/// sigma2 * (1 + kappa r) * exp(-kappa r); other zeta go through the Bessel
/// function. r < 0 is rejected.
double matern_cov(const MaternParams& params, double r);

namespace detail {
/// General Bessel-form evaluation, usable for any zeta (including 3/2,
/// where it serves as a cross-check of the closed form).
double matern_cov_bessel(const MaternParams& params, double r);
}  // namespace detail

/// Dense covariance with its lower Cholesky factor. jitter_used records the
/// diagonal shift that made the factorization succeed.
struct CovarianceModel {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd chol_lower;
  double jitter_used = 0.0;
};

/// Lower-Cholesky factorization of a symmetric PSD matrix, escalating the
/// diagonal jitter by x10 from jitter0 (or scale * 1e-10 if jitter0 is 0)
/// up to scale * 1e-4. Throws FactorizationError with the final jitter on
/// failure.
CovarianceModel factorize_spd(const Eigen::MatrixXd& sigma, double jitter0,
                              double scale);

/// Discretizes the Matern kernel on the grid's cell centers:
/// Sigma[i][j] = k(|center_i - center_j|) + jitter * 1[i==j].
CovarianceModel build_cov_matrix(const Grid1D& grid, const MaternParams& params,
                                 double jitter = 0.0);

/// Gaussian field on a grid: mean vector plus lower-triangular factor L with
/// L L^T = Sigma. Used both for the prior and the Laplace posterior.
/// Immutable after construction.
class GaussianFieldPosterior {
 public:
  GaussianFieldPosterior(Grid1D grid, Eigen::VectorXd mean,
                         Eigen::MatrixXd chol_lower);

  /// Builds from a dense covariance, factorizing with jitter escalation.
  /// An exactly-zero covariance yields the degenerate L = 0 factor.
  static GaussianFieldPosterior from_covariance(Grid1D grid,
                                                Eigen::VectorXd mean,
                                                const Eigen::MatrixXd& sigma,
                                                double jitter0 = 0.0);

  const Grid1D& grid() const { return grid_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& chol_lower() const { return chol_lower_; }

  /// Per-cell marginal variance Sigma_ii (cached row sums of squares of L).
  const Eigen::VectorXd& marginal_variance() const { return marginal_var_; }

  /// Dense covariance L * L^T (O(n^2) memory; built on demand).
  Eigen::MatrixXd covariance() const;

  int n_cells() const { return static_cast<int>(mean_.size()); }

 private:
  Grid1D grid_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd chol_lower_;
  Eigen::VectorXd marginal_var_;
};

/// One field draw: mean + L z with z standard normal generated from the seed.
/// Pure in (posterior, seed); concurrent calls with distinct seeds are safe.
Eigen::VectorXd sample_field(const GaussianFieldPosterior& posterior,
                             std::uint64_t seed);

}  // namespace voidplace
