#include "voidplace/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "voidplace/errors.hpp"
#include "voidplace/rng.hpp"

namespace voidplace {

MaternParams::MaternParams(double sigma2, double zeta, double beta_m)
    : sigma2(sigma2), zeta(zeta), beta_m(beta_m) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("MaternParams: sigma2 must be positive");
  }
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw std::invalid_argument("MaternParams: zeta must be positive");
  }
  if (!(beta_m > 0.0) || !std::isfinite(beta_m)) {
    throw std::invalid_argument("MaternParams: beta_m must be positive");
  }
}

double MaternParams::kappa() const { return std::sqrt(8.0 * zeta) / beta_m; }

namespace detail {

double matern_cov_bessel(const MaternParams& params, double r) {
  if (r == 0.0) return params.sigma2;
  const double kr = params.kappa() * r;
  // K_zeta underflows around kr ~ 700; the product is zero well before that.
  if (kr > 600.0) return 0.0;
  const double scale =
      std::exp2(1.0 - params.zeta) / std::tgamma(params.zeta);
  return params.sigma2 * scale * std::pow(kr, params.zeta) *
         std::cyl_bessel_k(params.zeta, kr);
}

}  // namespace detail

double matern_cov(const MaternParams& params, double r) {
  if (r < 0.0) {
    throw std::invalid_argument("matern_cov: distance must be >= 0, got " +
                                std::to_string(r));
  }
  if (r == 0.0) return params.sigma2;
  if (params.zeta == 1.5) {
    const double kr = params.kappa() * r;
    return params.sigma2 * (1.0 + kr) * std::exp(-kr);
  }
  return detail::matern_cov_bessel(params, r);
}

CovarianceModel factorize_spd(const Eigen::MatrixXd& sigma, double jitter0,
                              double scale) {
  const auto n = sigma.rows();
  if (sigma.cols() != n) {
    throw std::invalid_argument("factorize_spd: matrix must be square");
  }
  if (jitter0 < 0.0) {
    throw std::invalid_argument("factorize_spd: jitter must be >= 0");
  }

  if (sigma.isZero(0.0)) {
    // Degenerate but valid: L = 0 satisfies L L^T = Sigma exactly.
    return {sigma, Eigen::MatrixXd::Zero(n, n), 0.0};
  }

  const double jitter_cap = 1e-4 * scale;
  double jitter = jitter0;
  while (true) {
    Eigen::MatrixXd shifted = sigma;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      return {std::move(shifted), llt.matrixL(), jitter};
    }
    const double next = (jitter == 0.0) ? 1e-10 * scale : 10.0 * jitter;
    if (next > jitter_cap || !(next > jitter)) {
      throw FactorizationError(
          "covariance factorization failed; final jitter tried " +
              std::to_string(jitter),
          jitter);
    }
    jitter = next;
  }
}

CovarianceModel build_cov_matrix(const Grid1D& grid, const MaternParams& params,
                                 double jitter) {
  const int n = grid.n_cells();
  Eigen::MatrixXd sigma(n, n);
  for (int i = 0; i < n; ++i) {
    sigma(i, i) = params.sigma2;
    for (int j = 0; j < i; ++j) {
      const double r = (i - j) * grid.spacing_m();
      const double k = matern_cov(params, r);
      sigma(i, j) = k;
      sigma(j, i) = k;
    }
  }
  return factorize_spd(sigma, jitter, params.sigma2);
}

GaussianFieldPosterior::GaussianFieldPosterior(Grid1D grid, Eigen::VectorXd mean,
                                               Eigen::MatrixXd chol_lower)
    : grid_(grid), mean_(std::move(mean)), chol_lower_(std::move(chol_lower)) {
  const auto n = mean_.size();
  if (grid_.n_cells() != n || chol_lower_.rows() != n || chol_lower_.cols() != n) {
    throw std::invalid_argument(
        "GaussianFieldPosterior: grid, mean, and factor dimensions disagree");
  }
  marginal_var_ = chol_lower_.rowwise().squaredNorm();
}

GaussianFieldPosterior GaussianFieldPosterior::from_covariance(
    Grid1D grid, Eigen::VectorXd mean, const Eigen::MatrixXd& sigma,
    double jitter0) {
  const double scale = sigma.size() > 0 ? std::max(sigma.diagonal().maxCoeff(), 0.0) : 0.0;
  CovarianceModel model = factorize_spd(sigma, jitter0, scale > 0.0 ? scale : 1.0);
  return GaussianFieldPosterior(grid, std::move(mean),
                                std::move(model.chol_lower));
}

Eigen::MatrixXd GaussianFieldPosterior::covariance() const {
  return chol_lower_ * chol_lower_.transpose();
}

Eigen::VectorXd sample_field(const GaussianFieldPosterior& posterior,
                             std::uint64_t seed) {
  const int n = posterior.n_cells();
  Rng rng(seed);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.next_normal();
  Eigen::VectorXd draw = posterior.mean();
  draw.noalias() += posterior.chol_lower() * z;
  return draw;
}

}  // namespace voidplace
