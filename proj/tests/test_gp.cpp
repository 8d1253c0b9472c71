#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "test_support.hpp"
#include "voidplace/errors.hpp"
#include "voidplace/gp.hpp"
#include "voidplace/grid.hpp"

using namespace voidplace;

TEST_CASE("matern_cov at zero lag is exactly sigma2") {
  const MaternParams params(0.25, 1.5, 150.0);
  CHECK(matern_cov(params, 0.0) == 0.25);
  CHECK_THROWS_AS(matern_cov(params, -1.0), std::invalid_argument);
}

TEST_CASE("matern 3/2 closed form matches the Bessel form") {
  const MaternParams params(0.25, 1.5, 150.0);
  for (double r : {10.0, 100.0, 1000.0}) {
    const double closed = matern_cov(params, r);
    const double general = detail::matern_cov_bessel(params, r);
    const double oracle = testkit::matern_bessel_oracle(0.25, 1.5, 150.0, r);
    CHECK(std::fabs(closed - general) <= 1e-10 * std::fabs(oracle));
    CHECK(std::fabs(closed - oracle) <= 1e-10 * std::fabs(oracle));
  }
}

TEST_CASE("general Bessel path agrees with the long-double oracle off 3/2") {
  for (double zeta : {0.5, 1.0, 2.5}) {
    const MaternParams params(0.7, zeta, 200.0);
    for (double r : {5.0, 50.0, 400.0}) {
      const double oracle = testkit::matern_bessel_oracle(0.7, zeta, 200.0, r);
      CHECK(matern_cov(params, r) ==
            doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("matern decays to numerical zero at large range") {
  const MaternParams params(2.0, 1.5, 100.0);
  const double r = 50.0 / params.kappa();
  CHECK(matern_cov(params, r) < 1e-15 * params.sigma2);
}

TEST_CASE("matern 3/2 is non-increasing and maximal at zero") {
  const MaternParams params(1.3, 1.5, 250.0);
  double previous = matern_cov(params, 0.0);
  for (int i = 1; i <= 500; ++i) {
    const double r = i * 5.0;
    const double value = matern_cov(params, r);
    CHECK(value <= previous);
    CHECK(value <= matern_cov(params, 0.0));
    previous = value;
  }
}

TEST_CASE("build_cov_matrix on one cell adds the jitter directly") {
  const Grid1D grid(0.0, 50.0, 1);
  const MaternParams params(0.25, 1.5, 150.0);
  const CovarianceModel model = build_cov_matrix(grid, params, 1e-6);
  CHECK(model.sigma(0, 0) == 0.25 + 1e-6);
  CHECK(model.chol_lower(0, 0) == doctest::Approx(std::sqrt(0.25 + 1e-6)));
  CHECK(model.jitter_used == 1e-6);
}

TEST_CASE("covariance matrix is exactly symmetric") {
  const Grid1D grid(0.0, 50.0, 12);
  const MaternParams params(0.5, 1.5, 300.0);
  const CovarianceModel model = build_cov_matrix(grid, params, 0.0);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      CHECK(model.sigma(i, j) == model.sigma(j, i));
    }
  }
}

TEST_CASE("cholesky factor reconstructs the covariance") {
  const Grid1D grid(0.0, 50.0, 5);
  const MaternParams params(0.25, 1.5, 150.0);
  const CovarianceModel model = build_cov_matrix(grid, params, 0.0);
  const Eigen::MatrixXd rebuilt =
      model.chol_lower * model.chol_lower.transpose();
  CHECK((rebuilt - model.sigma).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("jitter escalates on near-singular kernels") {
  // beta far beyond the grid length makes all cells almost perfectly
  // correlated; the raw matrix fails LLT and needs diagonal help.
  const Grid1D grid(0.0, 1.0, 40);
  const MaternParams params(1.0, 1.5, 1e9);
  const CovarianceModel model = build_cov_matrix(grid, params, 0.0);
  CHECK(model.jitter_used > 0.0);
  CHECK(model.jitter_used <= 1e-4 * params.sigma2);
}

TEST_CASE("factorization failure reports the final jitter tried") {
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  try {
    factorize_spd(indefinite, 0.0, 1.0);
    FAIL("expected FactorizationError");
  } catch (const FactorizationError& e) {
    CHECK(e.final_jitter() == doctest::Approx(1e-4));
  }
}

TEST_CASE("sample_field with a zero factor returns the mean exactly") {
  const Grid1D grid(0.0, 50.0, 4);
  Eigen::VectorXd mean(4);
  mean << -1.0, 0.5, 2.0, 0.0;
  const GaussianFieldPosterior posterior(grid, mean,
                                         Eigen::MatrixXd::Zero(4, 4));
  const Eigen::VectorXd draw = sample_field(posterior, 99);
  for (int i = 0; i < 4; ++i) CHECK(draw[i] == mean[i]);
}

TEST_CASE("sample_field is deterministic in the seed") {
  const Grid1D grid(0.0, 50.0, 6);
  const MaternParams params(0.4, 1.5, 200.0);
  const CovarianceModel model = build_cov_matrix(grid, params, 0.0);
  const GaussianFieldPosterior posterior(grid, Eigen::VectorXd::Zero(6),
                                         model.chol_lower);
  const Eigen::VectorXd a = sample_field(posterior, 1234);
  const Eigen::VectorXd b = sample_field(posterior, 1234);
  const Eigen::VectorXd c = sample_field(posterior, 1235);
  CHECK((a.array() == b.array()).all());
  CHECK_FALSE((a.array() == c.array()).all());
}

TEST_CASE("sample moments match the posterior on a 3-cell grid") {
  const Grid1D grid(0.0, 50.0, 3);
  const MaternParams params(0.4, 1.5, 100.0);
  const CovarianceModel model = build_cov_matrix(grid, params, 0.0);
  Eigen::VectorXd mean(3);
  mean << -1.0, 0.0, 2.0;
  const GaussianFieldPosterior posterior(grid, mean, model.chol_lower);

  const int n_draws = 10000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd sum_outer = Eigen::MatrixXd::Zero(3, 3);
  for (int j = 0; j < n_draws; ++j) {
    const Eigen::VectorXd draw = sample_field(posterior, derive_seed(5150, j));
    sum += draw;
    sum_outer += draw * draw.transpose();
  }
  const Eigen::VectorXd sample_mean = sum / n_draws;
  const Eigen::MatrixXd sample_cov =
      sum_outer / n_draws - sample_mean * sample_mean.transpose();

  for (int i = 0; i < 3; ++i) {
    const double sd = std::sqrt(model.sigma(i, i));
    CHECK(std::fabs(sample_mean[i] - mean[i]) <=
          4.0 * sd / std::sqrt(static_cast<double>(n_draws)));
    CHECK(sample_cov(i, i) ==
          doctest::Approx(model.sigma(i, i)).epsilon(0.05));
  }
}

TEST_CASE("posterior construction validates dimensions") {
  const Grid1D grid(0.0, 50.0, 3);
  CHECK_THROWS_AS(GaussianFieldPosterior(grid, Eigen::VectorXd::Zero(2),
                                         Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaussianFieldPosterior(grid, Eigen::VectorXd::Zero(3),
                                         Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("from_covariance handles the exactly-zero matrix") {
  const Grid1D grid(0.0, 50.0, 3);
  const auto posterior = GaussianFieldPosterior::from_covariance(
      grid, Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Zero(3, 3));
  CHECK(posterior.chol_lower().isZero(0.0));
  CHECK(posterior.marginal_variance().isZero(0.0));
}
