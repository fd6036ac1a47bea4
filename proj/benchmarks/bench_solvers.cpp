#include <benchmark/benchmark.h>

#include <random>

#include <mvmr/graph.hpp>
#include <mvmr/optimizer.hpp>
#include <mvmr/synthetic.hpp>
#include <mvmr/trainer.hpp>

using namespace mvmr;

namespace {

struct SolverFixture {
  Matrix g, m, s;
  SelectorMatrices sel;

  explicit SolverFixture(Index n_samples, Index n_labels, Index l) {
    SyntheticSpec spec;
    spec.seed = 5;
    spec.labeled = static_cast<int>(l);
    spec.unlabeled = static_cast<int>(n_samples - l);
    spec.labels = static_cast<int>(n_labels);
    spec.views = 1;
    spec.informativeness = {1.0};
    const Dataset data = generate_synthetic(spec);

    TrainConfig cfg;
    cfg.gamma_o = 0.5;
    cfg.k_in = 10;
    cfg.k_out = n_labels > 2 ? 2 : 1;
    const ModelState model = fit_uniform_baseline(data, cfg);

    const Matrix lap =
        scalar_laplacian(knn_adjacency(model.views[0].gram, cfg.k_in), true).l;
    g = kron_expand(model.views[0].gram, model.q);
    m = kron_expand(lap, Matrix::Identity(n_labels, n_labels));

    Matrix y_labeled(l, n_labels);
    for (Index i = 0; i < l; ++i) y_labeled.row(i) = data.labels.row(i);
    sel = SelectorMatrices::from_labels(y_labeled, n_samples);
    s = build_s(g, m, 1e-3, 1e-3, sel);
  }
};

}  // namespace

static void BuildS(benchmark::State& state) {
  const SolverFixture fx(state.range(0), 3, state.range(0) / 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_s(fx.g, fx.m, 1e-3, 1e-3, fx.sel));
  }
}
BENCHMARK(BuildS)->Arg(64)->Arg(128)->Arg(200)->Unit(benchmark::kMillisecond);

static void DualProjectedGradient(benchmark::State& state) {
  const SolverFixture fx(state.range(0), 3, state.range(0) / 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dual_mu(fx.s, fx.sel));
  }
}
BENCHMARK(DualProjectedGradient)->Arg(64)->Arg(128)->Arg(200)->Unit(benchmark::kMillisecond);

static void FitMultiView(benchmark::State& state) {
  SyntheticSpec spec;
  spec.seed = 11;
  spec.labeled = 24;
  spec.unlabeled = static_cast<int>(state.range(0)) - 24;
  spec.labels = 2;
  spec.views = 3;
  spec.informativeness = {1.0, 0.5, 0.0};
  const Dataset data = generate_synthetic(spec);

  TrainConfig cfg;
  cfg.gamma_a = 1e-3;
  cfg.gamma_i = 1e-3;
  cfg.gamma_o = 0.5;
  cfg.k_in = 10;
  cfg.k_out = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(data, cfg));
  }
}
BENCHMARK(FitMultiView)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void SylvesterSolve(benchmark::State& state) {
  SyntheticSpec spec;
  spec.seed = 5;
  spec.labeled = static_cast<int>(state.range(0));
  spec.labels = 3;
  spec.views = 1;
  spec.informativeness = {1.0};
  const Dataset data = generate_synthetic(spec);

  TrainConfig cfg;
  cfg.gamma_o = 0.5;
  cfg.k_in = 10;
  cfg.k_out = 2;
  cfg.loss = LossKind::LeastSquares;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_uniform_baseline(data, cfg));
  }
}
BENCHMARK(SylvesterSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
