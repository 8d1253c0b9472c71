#include <benchmark/benchmark.h>

#include <cmath>

#include "voidplace/gp.hpp"
#include "voidplace/ingest.hpp"
#include "voidplace/lgcp_fit.hpp"
#include "voidplace/placement.hpp"
#include "voidplace/rng.hpp"
#include "voidplace/void_eval.hpp"

namespace {

using namespace voidplace;

MeanIntensityField make_field(const Grid1D& grid) {
  Eigen::VectorXd lb(grid.n_cells());
  Rng rng(42);
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double s = grid.cell_center(i);
    lb[i] = 0.05 + 0.4 * std::exp(-std::pow(s - 0.3 * grid.length_m(), 2) /
                                  (2.0 * 500.0 * 500.0)) +
            0.015 * rng.next_uniform();
  }
  return MeanIntensityField(grid, lb);
}

std::vector<int> all_cells(const Grid1D& grid) {
  std::vector<int> cells(static_cast<std::size_t>(grid.n_cells()));
  for (int i = 0; i < grid.n_cells(); ++i) cells[static_cast<std::size_t>(i)] = i;
  return cells;
}

void BM_MaternCovarianceBuild(benchmark::State& state) {
  const Grid1D grid(0.0, 50.0, static_cast<int>(state.range(0)));
  const MaternParams params(0.25, 1.5, 300.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_cov_matrix(grid, params, 0.0));
  }
}
BENCHMARK(BM_MaternCovarianceBuild)->Arg(128)->Arg(384);

void BM_GreedyPlace(benchmark::State& state) {
  const Grid1D grid(0.0, 50.0, 380);
  const MeanIntensityField field = make_field(grid);
  const SensorParams sensor(0.95, 40000.0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_place(field, sensor, all_cells(grid), m));
  }
}
BENCHMARK(BM_GreedyPlace)->Arg(10)->Arg(100);

void BM_LazyGreedyPlace(benchmark::State& state) {
  const Grid1D grid(0.0, 50.0, 380);
  const MeanIntensityField field = make_field(grid);
  const SensorParams sensor(0.95, 40000.0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazy_greedy_place(field, sensor, all_cells(grid), m));
  }
}
BENCHMARK(BM_LazyGreedyPlace)->Arg(10)->Arg(100);

void BM_BruteForcePlace(benchmark::State& state) {
  const Grid1D grid(0.0, 50.0, 40);
  const MeanIntensityField field = make_field(grid);
  const SensorParams sensor(0.95, 40000.0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        brute_force_place(field, sensor, all_cells(grid), m, 1e9));
  }
}
BENCHMARK(BM_BruteForcePlace)->Arg(2)->Arg(3)->Arg(4);

void BM_SampleSetGenerate(benchmark::State& state) {
  const Grid1D grid(0.0, 50.0, 128);
  const MaternParams params(0.25, 1.5, 300.0);
  const CovarianceModel cov = build_cov_matrix(grid, params, 0.0);
  const GaussianFieldPosterior posterior(grid, Eigen::VectorXd::Constant(128, -3.0),
                                         cov.chol_lower);
  const int draws = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        IntensitySampleSet::generate(posterior, 1.0, draws, 7));
  }
}
BENCHMARK(BM_SampleSetGenerate)->Arg(1000)->Arg(10000);

void BM_McVoidProbability(benchmark::State& state) {
  const Grid1D grid(0.0, 50.0, 128);
  const MaternParams params(0.25, 1.5, 300.0);
  const CovarianceModel cov = build_cov_matrix(grid, params, 0.0);
  const GaussianFieldPosterior posterior(grid, Eigen::VectorXd::Constant(128, -3.0),
                                         cov.chol_lower);
  const auto samples = IntensitySampleSet::generate(
      posterior, 1.0, static_cast<int>(state.range(0)), 7);
  const SensorParams sensor(0.95, 40000.0);
  const Placement placement(grid, {10, 40, 80, 100});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_void_probability(samples, sensor, placement));
  }
}
BENCHMARK(BM_McVoidProbability)->Arg(1000)->Arg(10000);

void BM_LaplaceFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid1D grid(0.0, 50.0, n);
  const MaternParams prior(0.3, 1.5, 300.0);
  const CovarianceModel cov = build_cov_matrix(grid, prior, 0.0);
  const GaussianFieldPosterior gen(grid, Eigen::VectorXd::Zero(n), cov.chol_lower);
  const EventCounts counts = synth_generate(sample_field(gen, 1), grid, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplace_fit(counts, 0.0, prior));
  }
}
BENCHMARK(BM_LaplaceFit)->Arg(60)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
