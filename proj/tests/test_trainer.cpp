#include <doctest.h>

#include <cmath>
#include <thread>

#include <mvmr/metrics.hpp>
#include <mvmr/synthetic.hpp>
#include <mvmr/trainer.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace mvmr;

namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.gamma_a = 1e-3;
  cfg.gamma_i = 1e-3;
  cfg.gamma_b = 1e-2;
  cfg.gamma_c = 1e-2;
  cfg.gamma_o = 0.5;
  cfg.k_in = 5;
  cfg.k_out = 1;
  cfg.stop_threshold = 1e-3;
  cfg.max_outer_iter = 20;
  return cfg;
}

SyntheticSpec benchmark_spec(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.labeled = 16;
  spec.unlabeled = 44;
  spec.test = 0;
  spec.labels = 2;
  spec.views = 2;
  spec.informativeness = {1.0, 0.0};
  spec.label_correlation = 0.4;
  spec.noise_level = 0.2;
  return spec;
}

double transductive_map(const ModelState& model, const Dataset& data, const Matrix& truth_all) {
  const Matrix scores = model.transductive_scores();
  const Index l = model.l;
  const Index u = model.train_count - l;
  Matrix scores_u(u, model.n), truth_u(u, model.n);
  for (Index i = 0; i < u; ++i) {
    scores_u.row(i) = scores.row(l + i);
    truth_u.row(i) = truth_all.row(model.train_rows[static_cast<size_t>(l + i)]);
  }
  (void)data;
  return evaluate_predictions(scores_u, truth_u).mean_ap.value.value_or(0.0);
}

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("single view runs collapse to the uniform baseline") {
  SyntheticSpec spec = benchmark_spec(7);
  spec.views = 1;
  spec.informativeness = {1.0};
  const Dataset data = generate_synthetic(spec);
  TrainConfig cfg = small_config();

  const ModelState learned = fit(data, cfg);
  const ModelState baseline = fit_uniform_baseline(data, cfg);
  CHECK(learned.beta.size() == 1);
  CHECK(learned.beta[0] == doctest::Approx(1.0));
  CHECK(learned.theta[0] == doctest::Approx(1.0));
  CHECK((learned.coeff - baseline.coeff).cwiseAbs().maxCoeff() == 0.0);
  CHECK((learned.bias - baseline.bias).cwiseAbs().maxCoeff() == 0.0);
  CHECK(learned.objective_trace.size() == baseline.objective_trace.size());
}

TEST_CASE("duplicated views keep the weights uniform") {
  SyntheticSpec spec = benchmark_spec(9);
  spec.views = 1;
  spec.informativeness = {1.0};
  Dataset data = generate_synthetic(spec);
  data.views.push_back(data.views[0]);
  data.views[1].name = "copy";

  const ModelState model = fit(data, small_config());
  CHECK(model.beta[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(model.beta[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(model.theta[0] == doctest::Approx(0.5).epsilon(1e-6));

  const ModelState baseline = fit_uniform_baseline(data, small_config());
  CHECK((model.transductive_scores() - baseline.transductive_scores()).cwiseAbs().maxCoeff() <=
        1e-6);
}

TEST_CASE("informative views win the kernel weights on a two-view benchmark") {
  int informative_wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec = benchmark_spec(seed);
    spec.labels = 1;
    const Dataset data = generate_synthetic(spec);
    const ModelState model = fit(data, small_config());
    if (model.beta[0] > model.beta[1]) ++informative_wins;
  }
  CHECK(informative_wins >= 9);
}

TEST_CASE("objective trace is non-increasing and converges quickly") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset data = generate_synthetic(benchmark_spec(seed));
    const ModelState model = fit(data, small_config());
    const auto& trace = model.objective_trace;
    REQUIRE(trace.size() >= 2);
    for (size_t k = 2; k < trace.size(); ++k) {
      CHECK(trace[k] <= trace[k - 1] + 1e-9 * std::abs(trace[k - 1]));
    }
    CHECK(trace.size() - 1 <= 10);  // outer iterations until the ratio rule fires
    CHECK(is_simplex(model.beta, 1e-9));
    CHECK(is_simplex(model.theta, 1e-9));
  }
}

TEST_CASE("transductive scores obey the representer identity") {
  const Dataset data = generate_synthetic(benchmark_spec(3));
  const ModelState model = fit(data, small_config());

  const Matrix g = kron_expand(model.combined_train_gram(), model.q);
  const Matrix direct = unflatten(g * model.a_flat(), model.n);
  Matrix with_bias = direct;
  with_bias.rowwise() += model.bias.transpose();
  CHECK((model.transductive_scores() - with_bias).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("zero coefficients predict the bias row") {
  const Dataset data = generate_synthetic(benchmark_spec(4));
  ModelState model = fit(data, small_config());
  model.coeff.setZero();
  model.bias << 0.25, -0.5;
  std::vector<Matrix> inputs;
  for (const auto& view : data.views) inputs.push_back(view.data.topRows(5));
  const Prediction pred = predict(model, inputs);
  for (Index i = 0; i < 5; ++i) {
    CHECK(pred.scores(i, 0) == doctest::Approx(0.25));
    CHECK(pred.scores(i, 1) == doctest::Approx(-0.5));
    CHECK(pred.predictions(i, 0) == 1);
    CHECK(pred.predictions(i, 1) == -1);
  }
}

TEST_CASE("scalar reduction matches the reference Laplacian SVM") {
  // V = 1, n = 1, gamma_o = 0: the pipeline reduces to a scalar-kernel
  // Laplacian SVM on a six-point instance.
  SyntheticSpec spec;
  spec.seed = 17;
  spec.labeled = 4;
  spec.unlabeled = 2;
  spec.test = 0;
  spec.labels = 1;
  spec.views = 1;
  spec.informativeness = {1.0};
  spec.label_correlation = 0.0;
  spec.noise_level = 0.3;
  const Dataset data = generate_synthetic(spec);

  TrainConfig cfg = small_config();
  cfg.gamma_o = 0.0;
  cfg.gamma_a = 1e-2;
  cfg.gamma_i = 1e-2;
  cfg.k_in = 3;
  const ModelState model = fit(data, cfg);

  const Matrix gram = model.views[0].gram;
  const AdjacencyGraph adj = knn_adjacency(gram, cfg.k_in);
  const Matrix lap = scalar_laplacian(adj, cfg.normalized_laplacian).l;
  Vector y_labeled(4);
  for (Index i = 0; i < 4; ++i) y_labeled[i] = data.labels(i, 0);

  const auto reference =
      oracles::lapsvm_reference(gram, lap, y_labeled, cfg.gamma_a, cfg.gamma_i);
  const Matrix ours = model.transductive_scores();
  for (Index i = 0; i < 6; ++i) {
    CHECK(ours(i, 0) == doctest::Approx(reference.scores[i]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("learned weights do not lose to the uniform baseline") {
  double learned_sum = 0.0, uniform_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec = benchmark_spec(seed);
    Dataset data = generate_synthetic(spec);
    // Keep the generator's truth for the unlabeled rows.
    SyntheticSpec full = spec;
    full.unlabeled = 0;
    full.labeled = spec.labeled + spec.unlabeled;
    const Dataset oracle_data = generate_synthetic(full);

    TrainConfig cfg = small_config();
    const double learned = transductive_map(fit(data, cfg), data, oracle_data.labels);
    const double uniform =
        transductive_map(fit_uniform_baseline(data, cfg), data, oracle_data.labels);
    learned_sum += learned;
    uniform_sum += uniform;
    CHECK(learned >= uniform - 0.01);
  }
  CHECK(learned_sum > uniform_sum);
}

TEST_CASE("degenerate label columns warn and proceed") {
  SyntheticSpec spec = benchmark_spec(5);
  Dataset data = generate_synthetic(spec);
  for (Index i : data.labeled) data.labels(i, 0) = 1.0;  // collapse label 0

  const ModelState model = fit(data, small_config());
  bool warned = false;
  for (const auto& w : model.warnings) {
    if (w.find("single class") != std::string::npos) warned = true;
  }
  CHECK(warned);
  CHECK(model.transductive_scores().allFinite());
}

TEST_CASE("fit is deterministic and safe for concurrent prediction") {
  const Dataset data = generate_synthetic(benchmark_spec(12));
  const TrainConfig cfg = small_config();
  const ModelState a = fit(data, cfg);
  const ModelState b = fit(data, cfg);
  CHECK((a.coeff - b.coeff).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.objective_trace == b.objective_trace);

  std::vector<Matrix> inputs;
  for (const auto& view : data.views) inputs.push_back(view.data.topRows(10));
  const Matrix expected = predict(a, inputs).scores;
  std::vector<Matrix> results(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] { results[static_cast<size_t>(t)] = predict(a, inputs).scores; });
  }
  for (auto& w : workers) w.join();
  for (const auto& r : results) CHECK((r - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("least squares mode solves the Sylvester system once per iteration") {
  SyntheticSpec spec = benchmark_spec(6);
  const Dataset data = generate_synthetic(spec);
  TrainConfig cfg = small_config();
  cfg.loss = LossKind::LeastSquares;
  const ModelState model = fit(data, cfg);
  CHECK(model.bias.cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_simplex(model.beta, 1e-9));
  // The ratio rule fires well before the iteration cap.
  CHECK(model.objective_trace.size() - 1 < static_cast<size_t>(cfg.max_outer_iter));

  // V = 1 least squares equals the direct Sylvester solve.
  SyntheticSpec single = spec;
  single.views = 1;
  single.informativeness = {1.0};
  const Dataset data1 = generate_synthetic(single);
  const ModelState model1 = fit(data1, cfg);

  const Matrix gram = model1.views[0].gram;
  const Matrix lap =
      scalar_laplacian(knn_adjacency(gram, cfg.k_in), cfg.normalized_laplacian).l;
  Matrix y = Matrix::Zero(model1.train_count, model1.n);
  y.topRows(model1.l) = Matrix::Zero(model1.l, model1.n);
  for (Index i = 0; i < model1.l; ++i) {
    y.row(i) = data1.labels.row(model1.train_rows[static_cast<size_t>(i)]);
  }
  const Matrix direct =
      solve_vvlrls_sylvester(gram, lap, model1.q, y, cfg.gamma_a, cfg.gamma_i, model1.l);
  CHECK((model1.coeff - direct).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("random weight initializations land near the uniform start") {
  const Dataset data = generate_synthetic(benchmark_spec(8));
  TrainConfig cfg = small_config();
  SyntheticSpec full = benchmark_spec(8);
  full.unlabeled = 0;
  full.labeled = 60;
  const Dataset oracle_data = generate_synthetic(full);

  const ModelState base = fit(data, cfg);
  const double base_map = transductive_map(base, data, oracle_data.labels);

  // A vertex start changes the first solve, confirming the initialization
  // actually reaches the optimizer.
  TrainConfig vertex = cfg;
  vertex.beta_init = {1.0, 0.0};
  vertex.theta_init = {1.0, 0.0};
  const ModelState from_vertex = fit(data, vertex);
  CHECK(from_vertex.objective_trace[1] != base.objective_trace[1]);
  CHECK(std::abs(transductive_map(from_vertex, data, oracle_data.labels) - base_map) <= 0.02);

  support::Rng rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    const Vector b = support::random_simplex(rng, 2);
    const Vector t = support::random_simplex(rng, 2);
    TrainConfig randomized = cfg;
    randomized.beta_init = {b[0], b[1]};
    randomized.theta_init = {t[0], t[1]};
    const double map = transductive_map(fit(data, randomized), data, oracle_data.labels);
    CHECK(std::abs(map - base_map) <= 0.02);
  }
}

TEST_CASE("histogram-style views train through the L1 and chi-squared kernels") {
  // Nonnegative features exercise the exponential-of-distance kernels used
  // for histogram representations, plus a linear-kernel view.
  support::Rng rng(121);
  const Index n_total = 30;
  Matrix hist = support::random_matrix(rng, n_total, 6, 0.0, 1.0);
  Matrix labels(n_total, 2);
  for (Index i = 0; i < n_total; ++i) {
    const double signal = hist.row(i).head(3).sum() - hist.row(i).tail(3).sum();
    labels(i, 0) = signal >= 0.0 ? 1.0 : -1.0;
    labels(i, 1) = hist(i, 0) >= 0.5 ? 1.0 : -1.0;
  }

  Dataset data;
  for (DistanceMetric metric : {DistanceMetric::L1, DistanceMetric::ChiSquared,
                                DistanceMetric::PrecomputedLinear}) {
    ViewData view;
    view.name = std::string("hist_") + to_string(metric);
    view.kind = ViewKind::Features;
    view.metric = metric;
    view.data = hist;
    data.views.push_back(std::move(view));
  }
  data.labels = labels;
  for (Index i = 0; i < 20; ++i) data.labeled.push_back(i);
  for (Index i = 20; i < 26; ++i) {
    data.unlabeled.push_back(i);
    data.labels.row(i).setZero();
  }
  for (Index i = 26; i < 30; ++i) data.test.push_back(i);

  TrainConfig cfg = small_config();
  cfg.k_in = 6;
  const ModelState model = fit(data, cfg);
  CHECK(is_simplex(model.beta, 1e-9));
  CHECK(model.transductive_scores().allFinite());

  std::vector<Matrix> inputs;
  for (const auto& view : data.views) {
    Matrix block(4, view.data.cols());
    for (Index i = 0; i < 4; ++i) block.row(i) = view.data.row(26 + i);
    inputs.push_back(std::move(block));
  }
  const Prediction pred = predict(model, inputs);
  CHECK(pred.scores.allFinite());
  CHECK(pred.scores.rows() == 4);

  // Transductive scores reproduce through predict's cross-kernel path up to
  // the diagonal ridge the training block carries.
  std::vector<Matrix> train_inputs;
  for (const auto& view : data.views) {
    Matrix block(model.train_count, view.data.cols());
    for (Index i = 0; i < model.train_count; ++i) {
      block.row(i) = view.data.row(model.train_rows[static_cast<size_t>(i)]);
    }
    train_inputs.push_back(std::move(block));
  }
  const Prediction on_train = predict(model, train_inputs);
  CHECK((on_train.scores - model.transductive_scores()).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("with_labeled_subset demotes rows and keeps shapes") {
  const Dataset data = generate_synthetic(benchmark_spec(2));
  std::vector<Index> keep(data.labeled.begin(), data.labeled.begin() + 8);
  const Dataset subset = with_labeled_subset(data, keep);
  subset.validate();
  CHECK(subset.labeled.size() == 8);
  CHECK(subset.unlabeled.size() == data.unlabeled.size() + 8);
  for (size_t i = 8; i < data.labeled.size(); ++i) {
    CHECK(subset.labels.row(data.labeled[i]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(with_labeled_subset(data, {data.unlabeled[0]}), std::invalid_argument);
}

}  // TEST_SUITE
