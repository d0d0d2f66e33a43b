#include <benchmark/benchmark.h>

#include "chg/autgroup.hpp"
#include "chg/bergman.hpp"
#include "chg/curvature.hpp"
#include "chg/kemetric.hpp"
#include "chg/oracle.hpp"

using namespace chg;

namespace {

DomainParams params_for(const benchmark::State& state) {
  return DomainParams::with_special_K(static_cast<int>(state.range(1)), static_cast<int>(state.range(0)));
}

const std::vector<Point>& points(const DomainParams& d) {
  static thread_local std::vector<Point> cache;
  static thread_local int p = 0, r = 0;
  if (p != d.p() || r != d.r()) {
    cache = sample_interior(d, 1, 64);
    p = d.p();
    r = d.r();
  }
  return cache;
}

void configs(benchmark::internal::Benchmark* b) {
  b->Args({1, 1})->Args({2, 1})->Args({2, 2})->Args({3, 1})->Args({3, 2});
}

void BM_GeneratingFunction(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generating_function(d, pts[i++ % pts.size()]));
}
BENCHMARK(BM_GeneratingFunction)->Apply(configs);

void BM_MetricPullback(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(metric_pullback(d, pts[i++ % pts.size()]));
}
BENCHMARK(BM_MetricPullback)->Apply(configs);

void BM_MetricBlocksClosed(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(metric_blocks_closed(d, pts[i++ % pts.size()]));
}
BENCHMARK(BM_MetricBlocksClosed)->Apply(configs);

void BM_MaResidual(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ma_residual(d, pts[i++ % pts.size()], DetRoute::kNumeric));
}
BENCHMARK(BM_MaResidual)->Apply(configs);

void BM_Jacobian(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_at_base(d, pts[i++ % pts.size()]));
}
BENCHMARK(BM_Jacobian)->Apply(configs);

void BM_Hsc(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  Rng rng(2);
  const Tangent t{random_complex(d.m(), rng), random_complex(d.r(), rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hsc(d, pts[i++ % pts.size()], t));
}
BENCHMARK(BM_Hsc)->Apply(configs);

void BM_FdMetric(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fd_metric(d, pts[i++ % pts.size()]));
}
BENCHMARK(BM_FdMetric)->Args({1, 1})->Args({2, 1})->Args({3, 1});

void BM_FdHsc(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const auto& pts = points(d);
  Rng rng(3);
  const Tangent t{random_complex(d.m(), rng), random_complex(d.r(), rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fd_hsc(d, pts[i++ % pts.size()], t));
}
BENCHMARK(BM_FdHsc)->Args({1, 1})->Args({2, 1})->Unit(benchmark::kMillisecond);

void BM_BergmanMetric(benchmark::State& state) {
  const DomainParams d = params_for(state);
  const BergmanCoeffs c = d.p() == 1 ? fit_coeffs_p1(d.r()) : BergmanCoeffs(d.r(), 2, {1, 1, 1, 1, 8});
  const auto& pts = points(d);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bergman_metric(d, c, pts[i++ % pts.size()]));
}
BENCHMARK(BM_BergmanMetric)->Args({1, 1})->Args({2, 1})->Args({2, 2});

void BM_EquivalenceScan(benchmark::State& state) {
  const DomainParams d = DomainParams::with_special_K(1, 2);
  const BergmanCoeffs c(1, 2, {1, 1, 1, 1, 8});
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(equivalence_bounds_scan(d, c, grid));
}
BENCHMARK(BM_EquivalenceScan)->Arg(41)->Arg(161);

}  // namespace

BENCHMARK_MAIN();
