#include <benchmark/benchmark.h>

#include "rsflat/multifractal.hpp"
#include "rsflat/sampling.hpp"
#include "rsflat/series.hpp"
#include "rsflat/structure.hpp"

using namespace rsflat;

static void BM_SampleGrid(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, n_max});
  std::int64_t m = 1;
  while (m <= 2 * c.lambda()) m <<= 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(c, m));
  }
  state.SetLabel("m=" + std::to_string(m));
}
BENCHMARK(BM_SampleGrid)->Arg(64)->Arg(256)->Arg(1024);

static void BM_CertifiedL4(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, n_max});
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm(c, 4.0));
  }
}
BENCHMARK(BM_CertifiedL4)->Arg(64)->Arg(256)->Arg(1024);

static void BM_AdaptiveL3(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const CoefficientSet c = riemann_coefficients(SeriesSpec{1.0, n_max});
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm(c, 3.0));
  }
}
BENCHMARK(BM_AdaptiveL3)->Arg(64)->Arg(256);

static void BM_StructureFunctionPoint(benchmark::State& state) {
  const double ell = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const SeriesSpec spec{1.0, sf_required_n_max(ell)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(structure_function(spec, 6.0, ell));
  }
}
BENCHMARK(BM_StructureFunctionPoint)->Arg(8)->Arg(12);

static void BM_LegendreTransform(benchmark::State& state) {
  const EtaCurve eta = eta_curve_closed_form(1.0);
  std::vector<double> alphas;
  for (double a = 0.5; a <= 0.75; a += 0.002) alphas.push_back(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(legendre_transform(eta, alphas));
  }
}
BENCHMARK(BM_LegendreTransform);

static void BM_L4Counting(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(l4_exact_counting(n));
  }
}
BENCHMARK(BM_L4Counting)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
