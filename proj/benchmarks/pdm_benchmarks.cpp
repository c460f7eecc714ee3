#include <benchmark/benchmark.h>

#include "pdm/algebra.hpp"
#include "pdm/catalog.hpp"
#include "pdm/flows.hpp"
#include "pdm/operators.hpp"
#include "pdm/order.hpp"
#include "pdm/rough_data.hpp"
#include "pdm/spectral.hpp"

namespace {

using namespace pdm;

GridFunction ramp(int K, int dim) {
  return GridFunction::sample(K, dim, [](const Point& x) { return cplx{std::sin(x[0]) + 0.3 * x[1], std::cos(2.0 * x[0])}; });
}

void BM_DftFft(benchmark::State& st) {
  const GridFunction u = ramp(static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(dft(u));
}
BENCHMARK(BM_DftFft)->RangeMultiplier(4)->Range(16, 4096);

void BM_DftDirect(benchmark::State& st) {
  const GridFunction u = ramp(static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(dft_direct(u));
}
BENCHMARK(BM_DftDirect)->RangeMultiplier(4)->Range(16, 1024);

void BM_Seminorm(benchmark::State& st) {
  const auto blk = IndexBlock::truncated(1, static_cast<int>(st.range(0)));
  const OpMatrix a = commutator(fourier_multiplier(catalog::abs_power(2.0), blk), toeplitz_potential(catalog::cos_potential(), blk));
  for (auto _ : st) benchmark::DoNotOptimize(seminorm(a, {{1, 0}, 4, 1.0}));
}
BENCHMARK(BM_Seminorm)->RangeMultiplier(2)->Range(16, 128);

void BM_EstimateOrder(benchmark::State& st) {
  std::vector<OpMatrix> fam;
  for (int M : {16, 32, 64}) {
    const auto blk = IndexBlock::truncated(1, M);
    fam.push_back(matmul(fourier_multiplier(catalog::abs_power(2.0), blk), toeplitz_potential(catalog::cos_potential(), blk)));
  }
  const OrderOptions o = OrderOptions::defaults(1);
  for (auto _ : st) benchmark::DoNotOptimize(estimate_order(fam, o));
}
BENCHMARK(BM_EstimateOrder)->Unit(benchmark::kMillisecond);

void BM_HermitianFlow(benchmark::State& st) {
  const auto blk = IndexBlock::truncated(1, static_cast<int>(st.range(0)));
  const OpMatrix g = fourier_multiplier(catalog::abs_power(2.0), blk) + toeplitz_potential(catalog::cos_potential(), blk);
  const Flow f = Flow::of(g, FlowStructure::Hermitian);
  const Eigen::VectorXcd x = smooth_data(blk, 0.5, 1);
  for (auto _ : st) benchmark::DoNotOptimize(f.apply(0.01, x));
}
BENCHMARK(BM_HermitianFlow)->RangeMultiplier(2)->Range(16, 128);

void BM_ChebyshevExpi(benchmark::State& st) {
  const int K = static_cast<int>(st.range(0));
  const OpMatrix g = spectral_multiplier(catalog::abs_power(2.0), K) + mult_matrix_fourier_alias(catalog::cos_potential(2.0), K);
  const SparseMatrixXcd h = g.entries().sparseView();
  const Eigen::VectorXcd x = Eigen::VectorXcd::Ones(K);
  for (auto _ : st) benchmark::DoNotOptimize(chebyshev_expi(h, 0.01, x));
}
BENCHMARK(BM_ChebyshevExpi)->RangeMultiplier(2)->Range(32, 256);

void BM_StrangStep(benchmark::State& st) {
  const auto blk = IndexBlock::truncated(1, static_cast<int>(st.range(0)));
  const OpMatrix a = fourier_multiplier(catalog::abs_power(2.0), blk), b = toeplitz_potential(catalog::cos_potential(), blk);
  const Flow fa = Flow::of(a, FlowStructure::Diagonal), fb = Flow::of(b, FlowStructure::Hermitian);
  const Eigen::VectorXcd x = smooth_data(blk, 0.5, 2);
  for (auto _ : st) benchmark::DoNotOptimize(split_apply(SplitScheme::strang(), fa, fb, 0.01, x));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(2)->Range(16, 128);

}  // namespace

BENCHMARK_MAIN();
