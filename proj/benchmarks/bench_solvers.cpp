#include <benchmark/benchmark.h>

#include "stabsel/dataset.hpp"
#include "stabsel/elastic_net.hpp"
#include "stabsel/rng.hpp"
#include "stabsel/stability.hpp"
#include "stabsel/svm.hpp"

using namespace stabsel;

namespace {

Dataset make_data(Eigen::Index n, Eigen::Index p) {
  Rng rng(1);
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = static_cast<double>(i % 2);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, j) = rng.next_gaussian() + (j < 5 ? 1.5 * (2.0 * y[i] - 1.0) : 0.0);
    }
  }
  auto [scaled, stats] = standardize(Dataset(std::move(x), std::move(y)));
  return scaled;
}

}  // namespace

static void BM_ElasticNetFit(benchmark::State& state) {
  const Dataset d = make_data(100, state.range(0));
  PenaltyConfig cfg;
  cfg.lambda1 = 5.0;
  cfg.lambda2 = 5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(d, cfg));
  }
}
BENCHMARK(BM_ElasticNetFit)->Arg(100)->Arg(500)->Arg(2000);

static void BM_LogisticFit(benchmark::State& state) {
  const Dataset d = make_data(100, state.range(0));
  PenaltyConfig cfg;
  cfg.lambda1 = 2.0;
  cfg.loss = Loss::logistic;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(d, cfg));
  }
}
BENCHMARK(BM_LogisticFit)->Arg(100)->Arg(500);

static void BM_SvmFit(benchmark::State& state) {
  const Dataset d = make_data(100, state.range(0));
  SvmConfig cfg;
  cfg.lambda2 = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_linear_svm(d, cfg));
  }
}
BENCHMARK(BM_SvmFit)->Arg(100)->Arg(500);

static void BM_StabilityRun(benchmark::State& state) {
  const Dataset d = make_data(60, 400);
  SubsampleParams params;
  params.n_resamples = static_cast<int>(state.range(0));
  PenaltyConfig base;
  base.lambda1 = 4.0;
  base.lambda2 = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(d, params, base, false, 2));
  }
}
BENCHMARK(BM_StabilityRun)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
