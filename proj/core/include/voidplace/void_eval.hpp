#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

#include "voidplace/gp.hpp"
#include "voidplace/grid.hpp"
#include "voidplace/placement.hpp"
#include "voidplace/sensor_model.hpp"

namespace voidplace {

/// Monte-Carlo void probability for one placement, with the closed-form
/// pieces that certify it. mu_u and sigma2_u are the sample mean and
/// (unbiased) variance of the expected undetected count over intensity
/// draws; gap_bound is the closed-form Jensen-gap certificate.
/// mc_void_probability leaves lower_bound/gap as NaN (they need the mean
/// intensity field); evaluate_placement fills everything.
struct VoidEstimate {
  double vp_mc = 0.0;
  double vp_se = 0.0;
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  double mu_u = 0.0;
  double sigma2_u = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  double gap_bound = 0.0;
};

/// Posterior draws of the horizon-scaled intensity (T/T_c) * exp(f) on the
/// grid, one column per draw. Regeneration from the same posterior, ratio,
/// count, and seed is bit-identical; generation parallelizes over draws
/// with per-draw seeds derived from the master seed.
class IntensitySampleSet {
 public:
  static IntensitySampleSet generate(const GaussianFieldPosterior& posterior,
                                     double horizon_ratio, int n_samples,
                                     std::uint64_t master_seed, int workers = 1);

  const Grid1D& grid() const { return grid_; }
  int n_samples() const { return static_cast<int>(samples_.cols()); }
  std::uint64_t master_seed() const { return master_seed_; }

  /// n_cells x n_samples; column j is draw j.
  const Eigen::MatrixXd& samples() const { return samples_; }

 private:
  IntensitySampleSet(Grid1D grid, Eigen::MatrixXd samples,
                     std::uint64_t master_seed)
      : grid_(grid), samples_(std::move(samples)), master_seed_(master_seed) {}

  Grid1D grid_;
  Eigen::MatrixXd samples_;
  std::uint64_t master_seed_;
};

/// Expected undetected count for one intensity draw:
/// integral of sample(s) * miss_prob(s, placement) over the segment.
double lambda_tilde(const Eigen::Ref<const Eigen::VectorXd>& sample,
                    const SensorParams& params, const Placement& placement);

/// Monte-Carlo estimate of the void probability: the average of
/// exp(-lambda_tilde_j) over draws, with its standard error, plus the
/// moments mu_u / sigma2_u of the lambda_tilde draws and the gap
/// certificate derived from them. Needs at least two draws.
VoidEstimate mc_void_probability(const IntensitySampleSet& samples,
                                 const SensorParams& params,
                                 const Placement& placement, int workers = 1);

/// Closed-form lower bound exp(-integral of lambda_bar * miss_prob); always
/// in (0, 1].
double jensen_lower_bound(const MeanIntensityField& field,
                          const SensorParams& params,
                          const Placement& placement);

/// Closed-form Jensen-gap certificate
/// sigma2_u * (1 - e^{-mu} - mu e^{-mu}) / mu^2, with its mu -> 0 limit
/// sigma2_u / 2. Negative inputs are rejected.
double jensen_gap_upper_bound(double mu_u, double sigma2_u);

/// Grid supremum of the gap expression
/// sigma2 * [ (e^{-L} - e^{-mu}) / (L - mu)^2 + e^{-mu} / (L - mu) ]
/// over the provided lambda_tilde values, taking the limit
/// sigma2 * e^{-mu} / 2 at the removable singularity L = mu.
double jensen_gap_sup_numeric(double mu_u, double sigma2_u,
                              const std::vector<double>& lambda_tilde_grid);

/// h(y) = (e^{-y} - 1 + y) / y^2, series branch below |y| = 1e-6 so the
/// removable singularity at 0 evaluates to exactly 1/2.
double h_function(double y);

/// Poisson pmf of observing n targets over a horizon multiple of the
/// collection window: (L T)^n e^{-L T} / n!, evaluated in log space.
double arrival_count_pmf(double big_lambda, double horizon_multiplier, long n);

/// Full void estimate for one placement: MC fields plus lower bound, gap,
/// and certificate.
VoidEstimate evaluate_placement(const IntensitySampleSet& samples,
                                const MeanIntensityField& field,
                                const SensorParams& params,
                                const Placement& placement, int workers = 1);

/// Void estimates for every prefix 0..m_max of an ordered placement,
/// reusing one sample set (common random numbers) and updating the miss
/// field incrementally. Entry m equals evaluate_placement of the m-prefix
/// bit-for-bit.
std::vector<VoidEstimate> evaluate_prefixes(const IntensitySampleSet& samples,
                                            const MeanIntensityField& field,
                                            const SensorParams& params,
                                            const Placement& placement,
                                            int m_max, int workers = 1);

}  // namespace voidplace
