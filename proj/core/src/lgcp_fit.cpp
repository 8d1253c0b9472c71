#include "voidplace/lgcp_fit.hpp"

#include <Eigen/Cholesky>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "voidplace/errors.hpp"

namespace voidplace {

EventCounts::EventCounts(Grid1D grid_in, Eigen::VectorXi counts_in,
                         double collection_span_in)
    : grid(grid_in), counts(std::move(counts_in)),
      collection_span(collection_span_in) {
  if (counts.size() != grid.n_cells()) {
    throw std::invalid_argument("EventCounts: counts length mismatch");
  }
  if ((counts.array() < 0).any()) {
    throw std::invalid_argument("EventCounts: counts must be non-negative");
  }
  if (!(collection_span > 0.0)) {
    throw std::invalid_argument("EventCounts: collection_span must be > 0");
  }
}

namespace {

struct ModeProblem {
  Eigen::VectorXd y;
  double exposure;              // cell width ds
  Eigen::VectorXd prior_mean;
  Eigen::MatrixXd prior_chol;   // lower L, L L^T = Sigma_prior
  Eigen::MatrixXd prior_inv;

  double quad_form(const Eigen::VectorXd& centered) const {
    return prior_chol.triangularView<Eigen::Lower>()
        .solve(centered)
        .squaredNorm();
  }

  // Unnormalized log posterior (constants dropped; used for the line
  // search and the diagnostics trace).
  double log_posterior(const Eigen::VectorXd& f) const {
    const double loglik =
        y.dot(f) - exposure * f.array().exp().sum();
    return loglik - 0.5 * quad_form(f - prior_mean);
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& f) const {
    return y - exposure * f.array().exp().matrix() -
           prior_inv * (f - prior_mean);
  }
};

}  // namespace

LaplaceFitResult laplace_fit(const EventCounts& counts, double prior_mean,
                             const MaternParams& prior, double jitter,
                             int max_iterations) {
  const Grid1D& grid = counts.grid;
  const int n = grid.n_cells();
  if (max_iterations < 1) {
    throw std::invalid_argument("laplace_fit: max_iterations must be >= 1");
  }

  CovarianceModel prior_cov = build_cov_matrix(grid, prior, jitter);

  ModeProblem problem;
  problem.y = counts.counts.cast<double>();
  problem.exposure = grid.spacing_m();
  problem.prior_mean = Eigen::VectorXd::Constant(n, prior_mean);
  problem.prior_chol = std::move(prior_cov.chol_lower);
  {
    Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd inv_l =
        problem.prior_chol.triangularView<Eigen::Lower>().solve(identity);
    problem.prior_inv = inv_l.transpose() * inv_l;
  }

  Eigen::VectorXd f = problem.prior_mean;
  std::vector<double> step_norms;
  std::vector<double> lp_trace;
  bool converged = false;
  int iterations = 0;
  double last_step = 0.0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    ++iterations;
    const Eigen::VectorXd w = problem.exposure * f.array().exp().matrix();
    const Eigen::VectorXd grad = problem.y - w - problem.prior_inv * (f - problem.prior_mean);

    Eigen::MatrixXd hessian = problem.prior_inv;
    hessian.diagonal() += w;
    Eigen::LLT<Eigen::MatrixXd> llt(hessian);
    if (llt.info() != Eigen::Success) {
      throw ConvergenceError("laplace_fit: Newton system not positive definite",
                             step_norms);
    }
    const Eigen::VectorXd delta = llt.solve(grad);
    last_step = delta.lpNorm<Eigen::Infinity>();
    step_norms.push_back(last_step);

    if (last_step < 1e-8) {
      f += delta;
      lp_trace.push_back(problem.log_posterior(f));
      converged = true;
      break;
    }

    const double lp_old = problem.log_posterior(f);
    // Accept within rounding noise of lp_old, otherwise the search stalls
    // rejecting steps whose true improvement is below one ulp.
    const double accept_floor = lp_old - 1e-12 * (1.0 + std::fabs(lp_old));
    double t = 1.0;
    Eigen::VectorXd f_new = f + delta;
    for (int halving = 0; halving < 30; ++halving) {
      if (problem.log_posterior(f_new) >= accept_floor) break;
      t *= 0.5;
      f_new = f + t * delta;
    }
    f = std::move(f_new);
    lp_trace.push_back(problem.log_posterior(f));
  }

  if (!converged) {
    throw ConvergenceError(
        "laplace_fit: no convergence after " + std::to_string(iterations) +
            " iterations (last step max-norm " + std::to_string(last_step) + ")",
        step_norms);
  }

  const Eigen::VectorXd w = problem.exposure * f.array().exp().matrix();
  Eigen::MatrixXd precision = problem.prior_inv;
  precision.diagonal() += w;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  Eigen::MatrixXd post_cov = llt.solve(Eigen::MatrixXd::Identity(n, n));
  post_cov = 0.5 * (post_cov + post_cov.transpose()).eval();

  const double grad_norm =
      problem.gradient(f).lpNorm<Eigen::Infinity>();

  LaplaceFitResult result{
      GaussianFieldPosterior::from_covariance(grid, std::move(f), post_cov),
      iterations,
      last_step,
      grad_norm,
      prior_cov.jitter_used,
      std::move(lp_trace)};
  return result;
}

Eigen::VectorXd posterior_quantiles(const GaussianFieldPosterior& posterior,
                                    double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("posterior_quantiles: q must be in (0, 1)");
  }
  const double z = boost::math::quantile(boost::math::normal_distribution<>(), q);
  const int n = posterior.n_cells();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(posterior.mean()[i] +
                      z * std::sqrt(posterior.marginal_variance()[i]));
  }
  return out;
}

double log_marginal_likelihood(const EventCounts& counts, double prior_mean,
                               const MaternParams& prior, double jitter) {
  const Grid1D& grid = counts.grid;
  const int n = grid.n_cells();
  const double ds = grid.spacing_m();

  LaplaceFitResult fit = laplace_fit(counts, prior_mean, prior, jitter);
  const Eigen::VectorXd& mode = fit.posterior.mean();

  const double log_ds = std::log(ds);
  double loglik = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = static_cast<double>(counts.counts[i]);
    loglik += y * (mode[i] + log_ds) - std::exp(mode[i]) * ds -
              std::lgamma(y + 1.0);
  }

  CovarianceModel prior_cov = build_cov_matrix(grid, prior, jitter);
  const Eigen::VectorXd centered =
      mode - Eigen::VectorXd::Constant(n, prior_mean);
  const double quad = prior_cov.chol_lower.triangularView<Eigen::Lower>()
                          .solve(centered)
                          .squaredNorm();
  const double logdet_prior =
      2.0 * prior_cov.chol_lower.diagonal().array().log().sum();
  const double logdet_post =
      2.0 * fit.posterior.chol_lower().diagonal().array().log().sum();

  return loglik - 0.5 * quad - 0.5 * logdet_prior + 0.5 * logdet_post;
}

std::size_t select_hyperparameters(const EventCounts& counts, double prior_mean,
                                   const std::vector<MaternParams>& candidates,
                                   double jitter,
                                   std::vector<double>* evidences) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_hyperparameters: no candidates");
  }
  std::size_t best = 0;
  double best_evidence = -std::numeric_limits<double>::infinity();
  if (evidences) evidences->clear();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double evidence =
        log_marginal_likelihood(counts, prior_mean, candidates[i], jitter);
    if (evidences) evidences->push_back(evidence);
    if (evidence > best_evidence) {
      best_evidence = evidence;
      best = i;
    }
  }
  return best;
}

}  // namespace voidplace
