#pragma once

#include <Eigen/Core>
#include <vector>

#include "voidplace/gp.hpp"
#include "voidplace/grid.hpp"

namespace voidplace {

/// Binned event observations over one collection window.
struct EventCounts {
  Grid1D grid;
  Eigen::VectorXi counts;       ///< per-cell event counts, >= 0
  double collection_span;       ///< T_c, length of the collection window

  EventCounts(Grid1D grid, Eigen::VectorXi counts, double collection_span);
};

/// Gaussian posterior of the log-intensity field plus Newton diagnostics.
struct LaplaceFitResult {
  GaussianFieldPosterior posterior;
  int iterations = 0;
  double final_step_max_norm = 0.0;
  double final_grad_max_norm = 0.0;
  double prior_jitter_used = 0.0;
  std::vector<double> log_posterior_trace;  ///< after each accepted step
};

/// Laplace approximation to p(f | y) with y_i ~ Poisson(exp(f_i) * ds)
/// given f, and prior f ~ N(prior_mean * 1, Matern covariance on the grid).
/// The mode is found by Newton iterations with step-halving (at most 30
/// halvings per step, which keeps the log-posterior non-decreasing);
/// convergence requires the Newton step max-norm below 1e-8 within
/// max_iterations, otherwise ConvergenceError carries the step-norm trace.
/// The returned covariance is (Sigma_prior^{-1} + W)^{-1} with
/// W = diag(exp(mode_i) * ds).
LaplaceFitResult laplace_fit(const EventCounts& counts, double prior_mean,
                             const MaternParams& prior, double jitter = 0.0,
                             int max_iterations = 100);

/// Per-cell q-quantile of the intensity lambda(s) = exp(f_s) under the
/// lognormal marginals: exp(m_i + z_q * sqrt(Sigma_ii)). q must lie in
/// (0, 1).
Eigen::VectorXd posterior_quantiles(const GaussianFieldPosterior& posterior,
                                    double q);

/// Laplace approximation of the log evidence log p(y), with all constant
/// terms (including the y! factors) so values are comparable across
/// hyperparameters on the same data.
double log_marginal_likelihood(const EventCounts& counts, double prior_mean,
                               const MaternParams& prior, double jitter = 0.0);

/// Evidence grid search over candidate hyperparameters; returns the index
/// of the best candidate (ties to the first) and, when requested, every
/// evidence value.
std::size_t select_hyperparameters(const EventCounts& counts, double prior_mean,
                                   const std::vector<MaternParams>& candidates,
                                   double jitter = 0.0,
                                   std::vector<double>* evidences = nullptr);

}  // namespace voidplace
