#include <benchmark/benchmark.h>

#include <random>

#include <mvmr/graph.hpp>
#include <mvmr/kernels.hpp>

using namespace mvmr;

namespace {

Matrix random_features(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
  }
  return m;
}

}  // namespace

static void PairwiseDistance(benchmark::State& state) {
  const auto metric = static_cast<DistanceMetric>(state.range(1));
  const Matrix x = random_features(state.range(0), 32, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise_distance(x, x, metric));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PairwiseDistance)
    ->ArgsProduct({{64, 128, 256, 512}, {0, 1, 2}})
    ->Complexity(benchmark::oNSquared);

static void ExpKernelPipeline(benchmark::State& state) {
  const Matrix x = random_features(state.range(0), 32, 2);
  const Matrix d = pairwise_distance(x, x, DistanceMetric::L2);
  for (auto _ : state) {
    GramMatrix g = unit_trace_normalize(exp_kernel(d));
    apply_psd_ridge(g, 1e-8);
    benchmark::DoNotOptimize(g.k);
  }
}
BENCHMARK(ExpKernelPipeline)->Arg(128)->Arg(256)->Arg(512);

static void KnnLaplacian(benchmark::State& state) {
  const Matrix x = random_features(state.range(0), 16, 3);
  const GramMatrix g = unit_trace_normalize(
      exp_kernel(pairwise_distance(x, x, DistanceMetric::L2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scalar_laplacian(knn_adjacency(g, 10), true));
  }
}
BENCHMARK(KnnLaplacian)->Arg(128)->Arg(256)->Arg(512);

static void KronExpand(benchmark::State& state) {
  const Matrix x = random_features(state.range(0), 16, 4);
  const GramMatrix g = unit_trace_normalize(
      exp_kernel(pairwise_distance(x, x, DistanceMetric::L2)));
  const Matrix q = Matrix::Identity(3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kron_expand(g.k, q));
  }
}
BENCHMARK(KronExpand)->Arg(64)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
