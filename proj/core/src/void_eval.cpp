#include "voidplace/void_eval.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "voidplace/parallel.hpp"
#include "voidplace/rng.hpp"

namespace voidplace {

IntensitySampleSet IntensitySampleSet::generate(
    const GaussianFieldPosterior& posterior, double horizon_ratio,
    int n_samples, std::uint64_t master_seed, int workers) {
  if (!(horizon_ratio > 0.0) || !std::isfinite(horizon_ratio)) {
    throw std::invalid_argument("IntensitySampleSet: horizon_ratio must be > 0");
  }
  if (n_samples < 1) {
    throw std::invalid_argument("IntensitySampleSet: need at least one draw");
  }
  const int n = posterior.n_cells();
  Eigen::MatrixXd samples(n, n_samples);
  parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t j) {
    const Eigen::VectorXd draw =
        sample_field(posterior, derive_seed(master_seed, j));
    auto col = samples.col(static_cast<Eigen::Index>(j));
    for (int i = 0; i < n; ++i) col[i] = horizon_ratio * std::exp(draw[i]);
  });
  return IntensitySampleSet(posterior.grid(), std::move(samples), master_seed);
}

namespace {

double integrate_thinned(const Grid1D& grid, const double* sample,
                         const Eigen::VectorXd& miss,
                         std::vector<double>& buf) {
  const int n = grid.n_cells();
  buf.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = sample[i] * miss[i];
  return pairwise_sum(buf.data(), buf.size()) * grid.spacing_m();
}

double jensen_lower_with_miss(const MeanIntensityField& field,
                              const Eigen::VectorXd& miss) {
  return std::exp(-field.grid.integrate(field.lambda_bar.cwiseProduct(miss)));
}

// MC fields and moments for a fixed miss field. All reductions are
// fixed-order pairwise sums, so the result is identical for any worker
// count.
VoidEstimate mc_with_miss(const IntensitySampleSet& samples,
                          const Eigen::VectorXd& miss, int workers) {
  const int n_draws = samples.n_samples();
  if (n_draws < 2) {
    throw std::invalid_argument(
        "mc_void_probability: need at least 2 draws for a standard error");
  }
  const Grid1D& grid = samples.grid();

  Eigen::VectorXd lt(n_draws);
  parallel_for(static_cast<std::size_t>(n_draws), workers, [&](std::size_t j) {
    thread_local std::vector<double> buf;
    lt[static_cast<Eigen::Index>(j)] = integrate_thinned(
        grid, samples.samples().col(static_cast<Eigen::Index>(j)).data(), miss,
        buf);
  });

  VoidEstimate est;
  est.mu_u = pairwise_sum(lt) / n_draws;

  Eigen::VectorXd dev(n_draws);
  for (int j = 0; j < n_draws; ++j) {
    const double d = lt[j] - est.mu_u;
    dev[j] = d * d;
  }
  est.sigma2_u = pairwise_sum(dev) / (n_draws - 1);

  Eigen::VectorXd vp(n_draws);
  for (int j = 0; j < n_draws; ++j) vp[j] = std::exp(-lt[j]);
  est.vp_mc = pairwise_sum(vp) / n_draws;

  for (int j = 0; j < n_draws; ++j) {
    const double d = vp[j] - est.vp_mc;
    dev[j] = d * d;
  }
  const double vp_var = pairwise_sum(dev) / (n_draws - 1);
  est.vp_se = std::sqrt(vp_var / n_draws);

  est.gap_bound = jensen_gap_upper_bound(est.mu_u, est.sigma2_u);
  return est;
}

}  // namespace

double lambda_tilde(const Eigen::Ref<const Eigen::VectorXd>& sample,
                    const SensorParams& params, const Placement& placement) {
  const Grid1D& grid = placement.grid();
  if (sample.size() != grid.n_cells()) {
    throw std::invalid_argument("lambda_tilde: sample length mismatch");
  }
  const Eigen::VectorXd miss = miss_prob_field(params, grid, placement);
  std::vector<double> buf;
  return integrate_thinned(grid, sample.data(), miss, buf);
}

VoidEstimate mc_void_probability(const IntensitySampleSet& samples,
                                 const SensorParams& params,
                                 const Placement& placement, int workers) {
  if (!(placement.grid() == samples.grid())) {
    throw std::invalid_argument("mc_void_probability: grid mismatch");
  }
  const Eigen::VectorXd miss =
      miss_prob_field(params, samples.grid(), placement);
  return mc_with_miss(samples, miss, workers);
}

double jensen_lower_bound(const MeanIntensityField& field,
                          const SensorParams& params,
                          const Placement& placement) {
  if (!(placement.grid() == field.grid)) {
    throw std::invalid_argument("jensen_lower_bound: grid mismatch");
  }
  return jensen_lower_with_miss(
      field, miss_prob_field(params, field.grid, placement));
}

double jensen_gap_upper_bound(double mu_u, double sigma2_u) {
  if (mu_u < 0.0 || sigma2_u < 0.0) {
    throw std::invalid_argument(
        "jensen_gap_upper_bound: moments must be non-negative");
  }
  if (mu_u < 1e-8) return 0.5 * sigma2_u;
  // (1 - e^{-mu} - mu e^{-mu}) / mu^2 == e^{-mu} * h(-mu), which stays
  // accurate for small mu where the direct form cancels.
  return sigma2_u * std::exp(-mu_u) * h_function(-mu_u);
}

double jensen_gap_sup_numeric(double mu_u, double sigma2_u,
                              const std::vector<double>& lambda_tilde_grid) {
  if (mu_u < 0.0 || sigma2_u < 0.0) {
    throw std::invalid_argument(
        "jensen_gap_sup_numeric: moments must be non-negative");
  }
  if (lambda_tilde_grid.empty()) {
    throw std::invalid_argument("jensen_gap_sup_numeric: empty grid");
  }
  const double e_mu = std::exp(-mu_u);
  double sup = -std::numeric_limits<double>::infinity();
  for (double lt : lambda_tilde_grid) {
    const double y = lt - mu_u;
    double value;
    if (std::fabs(y) < 1e-5) {
      // Removable singularity: the direct form loses eps/y^2 digits here,
      // so points this close take the limit value.
      value = 0.5 * e_mu;
    } else {
      value = (std::exp(-lt) - e_mu) / (y * y) + e_mu / y;
    }
    if (value > sup) sup = value;
  }
  return sigma2_u * sup;
}

double h_function(double y) {
  if (std::fabs(y) < 1e-6) {
    return 0.5 - y / 6.0 + y * y / 24.0;
  }
  // The numerator cancels near zero; extended precision keeps the direct
  // branch continuous with the series at the switch point.
  const long double yl = y;
  return static_cast<double>((std::expm1l(-yl) + yl) / (yl * yl));
}

double arrival_count_pmf(double big_lambda, double horizon_multiplier, long n) {
  const double lt = big_lambda * horizon_multiplier;
  if (n < 0) return 0.0;
  if (lt == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return std::exp(-lt);
  const double logp = static_cast<double>(n) * std::log(lt) - lt -
                      std::lgamma(static_cast<double>(n) + 1.0);
  return std::exp(logp);
}

VoidEstimate evaluate_placement(const IntensitySampleSet& samples,
                                const MeanIntensityField& field,
                                const SensorParams& params,
                                const Placement& placement, int workers) {
  if (!(placement.grid() == field.grid) ||
      !(samples.grid() == field.grid)) {
    throw std::invalid_argument("evaluate_placement: grid mismatch");
  }
  const Eigen::VectorXd miss = miss_prob_field(params, field.grid, placement);
  VoidEstimate est = mc_with_miss(samples, miss, workers);
  est.lower_bound = jensen_lower_with_miss(field, miss);
  est.gap = est.vp_mc - est.lower_bound;
  return est;
}

std::vector<VoidEstimate> evaluate_prefixes(const IntensitySampleSet& samples,
                                            const MeanIntensityField& field,
                                            const SensorParams& params,
                                            const Placement& placement,
                                            int m_max, int workers) {
  if (!(placement.grid() == field.grid) || !(samples.grid() == field.grid)) {
    throw std::invalid_argument("evaluate_prefixes: grid mismatch");
  }
  if (m_max < 0 || m_max > placement.size()) {
    throw std::invalid_argument("evaluate_prefixes: m_max out of range");
  }
  std::vector<VoidEstimate> rows;
  rows.reserve(static_cast<std::size_t>(m_max) + 1);

  Eigen::VectorXd miss = Eigen::VectorXd::Ones(field.grid.n_cells());
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) {
      apply_sensor_to_miss_field(params, field.grid, placement.cells()[m - 1],
                                 miss);
    }
    VoidEstimate est = mc_with_miss(samples, miss, workers);
    est.lower_bound = jensen_lower_with_miss(field, miss);
    est.gap = est.vp_mc - est.lower_bound;
    rows.push_back(est);
  }
  return rows;
}

}  // namespace voidplace
