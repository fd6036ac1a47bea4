// Acceptance suite: one numbered criterion per check, one pass/fail line
// each, nonzero exit when anything fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <mvmr/graph.hpp>
#include <mvmr/kernels.hpp>
#include <mvmr/metrics.hpp>
#include <mvmr/optimizer.hpp>
#include <mvmr/synthetic.hpp>
#include <mvmr/trainer.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace mvmr;

namespace {

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw CriterionFailure(message);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- shared benchmark helpers ----------------------------------------------

SyntheticSpec benchmark_spec(std::uint64_t seed, int labeled, int unlabeled, int test,
                             int labels, std::vector<double> informativeness) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.labeled = labeled;
  spec.unlabeled = unlabeled;
  spec.test = test;
  spec.labels = labels;
  spec.views = static_cast<int>(informativeness.size());
  spec.informativeness = std::move(informativeness);
  spec.label_correlation = 0.4;
  spec.noise_level = 0.2;
  return spec;
}

/// Ground truth for every row, recovered by regenerating the same latent
/// draws with nothing demoted to unlabeled.
Matrix full_truth(const SyntheticSpec& spec) {
  SyntheticSpec full = spec;
  full.labeled = spec.labeled + spec.unlabeled + spec.test;
  full.unlabeled = 0;
  full.test = 0;
  return generate_synthetic(full).labels;
}

TrainConfig benchmark_config(int labels) {
  TrainConfig cfg;
  cfg.gamma_a = 1e-3;
  cfg.gamma_i = 1e-3;
  cfg.gamma_b = 1e-2;
  cfg.gamma_c = 1e-2;
  cfg.gamma_o = 0.5;
  cfg.k_in = 10;
  cfg.k_out = labels > 2 ? 2 : 1;
  cfg.stop_threshold = 1e-3;
  cfg.max_outer_iter = 50;
  return cfg;
}

Matrix transductive_unlabeled_scores(const ModelState& model) {
  const Matrix scores = model.transductive_scores();
  return scores.bottomRows(model.train_count - model.l);
}

Matrix unlabeled_truth(const ModelState& model, const Matrix& truth_all) {
  const Index u = model.train_count - model.l;
  Matrix out(u, model.n);
  for (Index i = 0; i < u; ++i) {
    out.row(i) = truth_all.row(model.train_rows[static_cast<size_t>(model.l + i)]);
  }
  return out;
}

// --- criteria ---------------------------------------------------------------

std::string criterion_dual_qp_oracle() {
  support::Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 3);
    const Index l = 2 + static_cast<Index>(rng() % 5);
    const Matrix y = support::random_labels(rng, l, n);
    const SelectorMatrices sel = SelectorMatrices::from_labels(y, l);
    const double scale = std::exp(support::uniform(rng, std::log(0.1), std::log(1e3)));
    const Matrix s = support::random_psd(rng, sel.dual_size(), scale);

    const DualVariables ours = solve_dual_mu(s, sel);
    const Vector reference = oracles::dual_qp_reference(s, sel);
    const double gap = std::abs(oracles::dual_objective(s, ours.mu) -
                                oracles::dual_objective(s, reference));
    worst = std::max(worst, gap);
    require(gap <= 1e-6, "objective gap " + fmt(gap) + " on trial " + std::to_string(trial));
  }
  return "50 instances, max objective gap " + fmt(worst);
}

std::string criterion_weight_subproblem_oracle() {
  support::Rng rng(1002);
  double worst = 0.0;
  int clips = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index v = 2 + static_cast<Index>(rng() % 3);
    const Matrix h_mat = support::random_psd(rng, v, std::exp(support::uniform(rng, -2.0, 2.0)));
    const double h_scale = trial % 2 == 0 ? 10.0 : 0.5;  // large gaps activate the clips
    const Vector h = support::random_matrix(rng, v, 1).col(0) * h_scale;
    const double gamma_b = std::exp(support::uniform(rng, std::log(1e-3), std::log(1.0)));

    const Vector beta = update_beta(h_mat, h, support::random_simplex(rng, v), gamma_b);
    if (beta.minCoeff() < 1e-12) ++clips;
    const Vector ref = oracles::simplex_quadratic_reference(
        h_mat + gamma_b * Matrix::Identity(v, v), -h, uniform_weights(v));
    const double gap =
        std::abs(beta_objective(h_mat, h, beta, gamma_b) - beta_objective(h_mat, h, ref, gamma_b));
    worst = std::max(worst, gap);
    require(gap <= 1e-6, "beta objective gap " + fmt(gap));

    const Vector s = support::random_matrix(rng, v, 1).col(0).cwiseAbs() * h_scale;
    const double gamma_c = std::exp(support::uniform(rng, std::log(1e-3), std::log(1.0)));
    const Vector theta = update_theta(s, support::random_simplex(rng, v), gamma_c);
    const Vector ref_t = oracles::simplex_quadratic_reference(
        gamma_c * Matrix::Identity(v, v), s, uniform_weights(v));
    const double gap_t =
        std::abs(theta_objective(s, theta, gamma_c) - theta_objective(s, ref_t, gamma_c));
    worst = std::max(worst, gap_t);
    require(gap_t <= 1e-6, "theta objective gap " + fmt(gap_t));
  }
  require(clips > 0, "no clip-activating draw appeared");
  return "100 draws (" + std::to_string(clips) + " clipped), max objective gap " + fmt(worst);
}

std::string criterion_sylvester() {
  support::Rng rng(1003);
  double worst_residual = 0.0, worst_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n_samples = 4 + static_cast<Index>(rng() % 5);
    const Index n_labels = 1 + static_cast<Index>(rng() % 3);
    const Index l = 2 + static_cast<Index>(rng() % (n_samples - 2));
    const auto inst = support::make_instance(rng, n_samples, n_labels, l, 2);
    Matrix y = Matrix::Zero(n_samples, n_labels);
    y.topRows(l) = inst.y_labeled;

    const Matrix a =
        solve_vvlrls_sylvester(inst.gk, inst.lap, inst.q, y, inst.gamma_a, inst.gamma_i, l);

    const double scale = 1.0 / (static_cast<double>(l) * inst.gamma_a);
    Matrix jl_gk = inst.gk;
    jl_gk.bottomRows(n_samples - l).setZero();
    const Matrix residual =
        -scale * (jl_gk + static_cast<double>(l) * inst.gamma_i * inst.lap * inst.gk) * a *
            inst.q -
        a + scale * y;
    worst_residual = std::max(worst_residual, residual.norm() / y.norm());
    require(residual.norm() <= 1e-8 * y.norm(), "residual " + fmt(residual.norm() / y.norm()));

    const Matrix ref = oracles::sylvester_reference(inst.gk, inst.lap, inst.q, y, inst.gamma_a,
                                                    inst.gamma_i, l);
    const double gap = (a - ref).cwiseAbs().maxCoeff() /
                       std::max(1.0, ref.cwiseAbs().maxCoeff());
    worst_gap = std::max(worst_gap, gap);
    require(gap <= 1e-8, "vectorized-solve gap " + fmt(gap));
  }
  return "20 instances, max relative residual " + fmt(worst_residual) + ", max solve gap " +
         fmt(worst_gap);
}

std::string criterion_laplacian_combination() {
  support::Rng rng(1004);
  double worst_identity = 0.0, worst_eig = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n_vertices = 5 + static_cast<Index>(rng() % 4);
    const Index n_labels = 1 + static_cast<Index>(rng() % 3);
    const Index views = 2 + static_cast<Index>(rng() % 2);
    const int k = 2;

    std::vector<AdjacencyGraph> graphs;
    std::vector<GraphLaplacian> ls;
    for (Index v = 0; v < views; ++v) {
      Matrix sim = support::random_psd(rng, n_vertices).cwiseAbs();
      sim = 0.5 * (sim + sim.transpose());
      sim.diagonal().array() += 1.0;
      graphs.push_back(knn_adjacency(sim, k));
      ls.push_back(scalar_laplacian(graphs.back(), false));
    }
    const Vector theta = support::random_simplex(rng, views);

    const GraphLaplacian combined = combine_laplacians(ls, theta);
    AdjacencyGraph merged;
    merged.w = Matrix::Zero(n_vertices, n_vertices);
    for (Index v = 0; v < views; ++v) merged.w += theta[v] * graphs[static_cast<size_t>(v)].w;
    const GraphLaplacian direct = scalar_laplacian(merged, false);
    const double gap = (combined.l - direct.l).cwiseAbs().maxCoeff();
    worst_identity = std::max(worst_identity, gap);
    require(gap <= 1e-12, "adjacency identity gap " + fmt(gap));

    Matrix m = Matrix::Zero(n_vertices * n_labels, n_vertices * n_labels);
    for (Index v = 0; v < views; ++v) {
      m += theta[v] * kron_expand(ls[static_cast<size_t>(v)].l,
                                  Matrix::Identity(n_labels, n_labels));
    }
    const double min_eig = support::min_eigenvalue(m);
    worst_eig = std::min(worst_eig, min_eig);
    require(min_eig >= -1e-9, "vector-valued Laplacian min eigenvalue " + fmt(min_eig));
  }
  return "50 graphs, max identity gap " + fmt(worst_identity) + ", min eigenvalue " +
         fmt(worst_eig);
}

std::string criterion_convergence() {
  int worst_iters = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int labels = seed % 2 == 0 ? 2 : 3;
    const std::vector<double> inf = seed % 3 == 0 ? std::vector<double>{1.0, 0.0}
                                                  : std::vector<double>{1.0, 0.5};
    const SyntheticSpec spec = benchmark_spec(seed, 16, 44, 0, labels, inf);
    const Dataset data = generate_synthetic(spec);
    TrainConfig cfg = benchmark_config(labels);
    cfg.k_in = 5;

    const ModelState model = fit(data, cfg);
    const auto& trace = model.objective_trace;
    for (size_t k = 2; k < trace.size(); ++k) {
      require(trace[k] <= trace[k - 1] + 1e-9 * std::abs(trace[k - 1]),
              "objective increased at seed " + std::to_string(seed) + " step " +
                  std::to_string(k));
    }
    const int iters = static_cast<int>(trace.size()) - 1;
    require(iters <= 10, "stopping rule took " + std::to_string(iters) + " iterations at seed " +
                             std::to_string(seed));
    worst_iters = std::max(worst_iters, iters);
  }
  return "20 seeds, non-increasing traces, stopping rule within " +
         std::to_string(worst_iters) + " iterations";
}

std::string criterion_multiview_enhancement() {
  double learned_sum = 0.0, uniform_sum = 0.0;
  int informative_argmax = 0;
  double worst_margin = 1.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticSpec spec = benchmark_spec(seed, 40, 160, 0, 3, {1.0, 0.5, 0.0});
    const Dataset data = generate_synthetic(spec);
    const Matrix truth = full_truth(spec);
    const TrainConfig cfg = benchmark_config(3);

    const ModelState learned = fit(data, cfg);
    const ModelState uniform = fit_uniform_baseline(data, cfg);
    const double learned_map =
        evaluate_predictions(transductive_unlabeled_scores(learned),
                             unlabeled_truth(learned, truth))
            .mean_ap.value.value_or(0.0);
    const double uniform_map =
        evaluate_predictions(transductive_unlabeled_scores(uniform),
                             unlabeled_truth(uniform, truth))
            .mean_ap.value.value_or(0.0);

    learned_sum += learned_map;
    uniform_sum += uniform_map;
    worst_margin = std::min(worst_margin, learned_map - uniform_map);
    require(learned_map >= uniform_map - 0.01,
            "seed " + std::to_string(seed) + ": learned mAP " + fmt(learned_map) +
                " vs uniform " + fmt(uniform_map));

    Index argmax = 0;
    learned.beta.maxCoeff(&argmax);
    if (argmax == 0) ++informative_argmax;
  }
  require(learned_sum > uniform_sum, "learned weights did not improve the average mAP");
  require(informative_argmax >= 8, "informative view won beta only " +
                                       std::to_string(informative_argmax) + "/10 times");
  return "10 seeds, mean mAP " + fmt(learned_sum / 10.0) + " vs uniform " +
         fmt(uniform_sum / 10.0) + ", worst margin " + fmt(worst_margin) + ", beta argmax " +
         std::to_string(informative_argmax) + "/10";
}

std::string criterion_initialization_robustness() {
  const SyntheticSpec spec = benchmark_spec(29, 30, 90, 0, 3, {1.0, 0.5, 0.0});
  const Dataset data = generate_synthetic(spec);
  const Matrix truth = full_truth(spec);
  const TrainConfig cfg = benchmark_config(3);

  const ModelState base = fit(data, cfg);
  const double base_map = evaluate_predictions(transductive_unlabeled_scores(base),
                                               unlabeled_truth(base, truth))
                              .mean_ap.value.value_or(0.0);

  support::Rng rng(1007);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Vector b = support::random_simplex(rng, 3);
    const Vector t = support::random_simplex(rng, 3);
    TrainConfig randomized = cfg;
    randomized.beta_init = {b[0], b[1], b[2]};
    randomized.theta_init = {t[0], t[1], t[2]};
    const ModelState model = fit(data, randomized);
    const double map = evaluate_predictions(transductive_unlabeled_scores(model),
                                            unlabeled_truth(model, truth))
                           .mean_ap.value.value_or(0.0);
    worst = std::max(worst, std::abs(map - base_map));
    require(std::abs(map - base_map) <= 0.02,
            "random initialization drifted by " + fmt(std::abs(map - base_map)));
  }
  return "10 initializations, max mAP drift " + fmt(worst) + " from " + fmt(base_map);
}

std::string criterion_scalar_reduction() {
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

  TrainConfig cfg = benchmark_config(1);
  cfg.gamma_o = 0.0;
  cfg.gamma_a = 1e-2;
  cfg.gamma_i = 1e-2;
  cfg.k_in = 3;
  const ModelState model = fit(data, cfg);

  const Matrix gram = model.views[0].gram;
  const Matrix lap = scalar_laplacian(knn_adjacency(gram, cfg.k_in), true).l;
  Vector y(4);
  for (Index i = 0; i < 4; ++i) y[i] = data.labels(i, 0);
  const auto reference = oracles::lapsvm_reference(gram, lap, y, cfg.gamma_a, cfg.gamma_i);

  const Matrix ours = model.transductive_scores();
  double worst = 0.0;
  for (Index i = 0; i < 6; ++i) {
    worst = std::max(worst, std::abs(ours(i, 0) - reference.scores[i]));
  }
  require(worst <= 1e-4, "decision value gap " + fmt(worst));
  return "6-point instance, max decision-value gap " + fmt(worst);
}

std::string criterion_metrics_exactness() {
  // Worked values first.
  Vector scores(4), truth(4);
  scores << 4, 3, 2, 1;
  truth << 1, -1, 1, -1;
  require(std::abs(*average_precision_11pt(scores, truth) - 28.0 / 33.0) <= 1e-12,
          "11-point AP worked value");
  Vector s3(3), t3(3);
  s3 << 0.9, 0.8, 0.3;
  t3 << 1, -1, 1;
  require(std::abs(*auc(s3, t3) - 0.5) <= 1e-12, "AUC worked value");
  Vector rls(3), rlt(3);
  rls << 0.5, 0.5, 0.2;
  rlt << 1, -1, -1;
  require(std::abs(*ranking_loss(rls.transpose(), rlt.transpose()).value - 0.5) <= 1e-12,
          "ranking loss worked value");

  long cases = 0;
  for (Index m = 1; m <= 6; ++m) {
    long score_patterns = 1;
    for (Index i = 0; i < m; ++i) score_patterns *= 3;
    for (long sp = 0; sp < score_patterns; ++sp) {
      Vector sc(m);
      long rest = sp;
      for (Index i = 0; i < m; ++i) {
        sc[i] = static_cast<double>(rest % 3);
        rest /= 3;
      }
      for (long tp = 0; tp < (1L << m); ++tp) {
        Vector tr(m);
        for (Index i = 0; i < m; ++i) tr[i] = (tp >> i) & 1 ? 1.0 : -1.0;
        const bool has_pos = tr.maxCoeff() > 0.0;
        const bool has_neg = tr.minCoeff() < 0.0;
        if (has_pos) {
          require(std::abs(*average_precision_11pt(sc, tr) -
                           oracles::ap_11pt_reference(sc, tr)) <= 1e-14,
                  "AP oracle disagreement");
        }
        if (has_pos && has_neg) {
          require(std::abs(*auc(sc, tr) - oracles::auc_reference(sc, tr)) <= 1e-14,
                  "AUC oracle disagreement");
          require(std::abs(*ranking_loss(sc.transpose(), tr.transpose()).value -
                           oracles::ranking_loss_reference(sc, tr)) <= 1e-14,
                  "ranking loss oracle disagreement");
        }
        ++cases;
      }
    }
  }
  return "exhaustive agreement on " + std::to_string(cases) + " orderings up to 6 items";
}

std::string criterion_out_of_sample() {
  const Index labels = 3;
  Matrix trans_sum = Matrix::Zero(1, labels);
  Matrix ind_sum = Matrix::Zero(1, labels);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticSpec spec = benchmark_spec(seed + 100, 40, 120, 40, 3, {1.0, 0.5, 0.0});
    const Dataset data = generate_synthetic(spec);
    const Matrix truth = full_truth(spec);
    const TrainConfig cfg = benchmark_config(3);
    const ModelState model = fit(data, cfg);

    const EvaluationReport trans = evaluate_predictions(transductive_unlabeled_scores(model),
                                                        unlabeled_truth(model, truth));

    std::vector<Matrix> inputs;
    Matrix test_truth(static_cast<Index>(data.test.size()), labels);
    for (size_t v = 0; v < data.views.size(); ++v) {
      Matrix block(static_cast<Index>(data.test.size()), data.views[v].data.cols());
      for (size_t i = 0; i < data.test.size(); ++i) {
        block.row(static_cast<Index>(i)) = data.views[v].data.row(data.test[i]);
      }
      inputs.push_back(std::move(block));
    }
    for (size_t i = 0; i < data.test.size(); ++i) {
      test_truth.row(static_cast<Index>(i)) = data.labels.row(data.test[i]);
    }
    const EvaluationReport ind = evaluate_predictions(predict(model, inputs).scores, test_truth);

    for (Index j = 0; j < labels; ++j) {
      require(trans.ap[static_cast<size_t>(j)].has_value() &&
                  ind.ap[static_cast<size_t>(j)].has_value(),
              "undefined per-label AP at seed " + std::to_string(seed));
      trans_sum(0, j) += *trans.ap[static_cast<size_t>(j)];
      ind_sum(0, j) += *ind.ap[static_cast<size_t>(j)];
    }
  }
  double worst = 0.0;
  for (Index j = 0; j < labels; ++j) {
    const double gap = std::abs(trans_sum(0, j) - ind_sum(0, j)) / 10.0;
    worst = std::max(worst, gap);
    require(gap <= 0.15, "label " + std::to_string(j) + " inductive AP drifted by " + fmt(gap));
  }
  return "10 seeds, max per-label transductive-vs-inductive AP gap " + fmt(worst);
}

std::string criterion_invariant_suite() {
  support::Rng rng(1011);
  for (int kase = 0; kase < 1000; ++kase) {
    // kernel_engine invariants on a small random view set.
    {
      const Index n = 4 + static_cast<Index>(rng() % 3);
      std::vector<GramMatrix> gs;
      double worst = 0.0;
      for (int v = 0; v < 2; ++v) {
        Matrix x = support::random_matrix(rng, n, 3, 0.0, 2.0);
        x.row(n - 1) = x.row(0);  // duplicate rows for identity-of-indiscernibles
        const DistanceMetric metric = kase % 3 == 0   ? DistanceMetric::L1
                                      : kase % 3 == 1 ? DistanceMetric::L2
                                                      : DistanceMetric::ChiSquared;
        const Matrix d = pairwise_distance(x, x, metric);
        require((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0, "distance symmetry");
        require(d(0, n - 1) == 0.0, "identity of indiscernibles");
        GramMatrix g = exp_kernel(d);
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) {
            for (Index p = 0; p < n; ++p) {
              for (Index q = 0; q < n; ++q) {
                if (d(i, j) < d(p, q)) {
                  require(g.k(i, j) > g.k(p, q), "exp kernel monotonicity");
                }
              }
            }
          }
        }
        g = unit_trace_normalize(std::move(g));
        const GramMatrix twice = unit_trace_normalize(g);
        require((twice.k - g.k).cwiseAbs().maxCoeff() <= 1e-12, "normalization idempotence");
        worst = std::min(worst, support::min_eigenvalue(g.k));
        gs.push_back(std::move(g));
      }
      const Vector w = support::random_simplex(rng, 2);
      require(support::min_eigenvalue(combine_kernels(gs, w).k) >= worst - 1e-8,
              "combination PSD preservation");
    }

    // graph_laplacian invariants.
    {
      const Index n_vertices = 5;
      const Index n_labels = 2;
      std::vector<AdjacencyGraph> graphs;
      std::vector<GraphLaplacian> ls;
      for (int v = 0; v < 2; ++v) {
        Matrix sim = support::random_psd(rng, n_vertices).cwiseAbs();
        sim = 0.5 * (sim + sim.transpose());
        sim.diagonal().array() += 1.0;
        graphs.push_back(knn_adjacency(sim, 2));
        ls.push_back(scalar_laplacian(graphs.back(), false));
      }
      const Vector theta = support::random_simplex(rng, 2);
      const GraphLaplacian combined = combine_laplacians(ls, theta);
      AdjacencyGraph merged;
      merged.w = theta[0] * graphs[0].w + theta[1] * graphs[1].w;
      require((combined.l - scalar_laplacian(merged, false).l).cwiseAbs().maxCoeff() <= 1e-12,
              "combined adjacency identity");

      const Matrix m = kron_expand(combined.l, Matrix::Identity(n_labels, n_labels));
      require(support::min_eigenvalue(m) >= -1e-9, "vector-valued Laplacian PSD");
      require(support::min_eigenvalue(
                  kron_expand(support::random_psd(rng, 3), support::random_psd(rng, 2))) >= -1e-9,
              "Kronecker PSD");
      for (int f = 0; f < 100; ++f) {
        const Vector x = support::random_matrix(rng, m.rows(), 1).col(0);
        require(x.dot(m * x) >= -1e-9, "quadratic form nonnegativity");
      }
    }

    // optimizer invariants on a small end-to-end instance.
    {
      const Index n_samples = 4 + static_cast<Index>(rng() % 5);
      const Index n_labels = 1 + static_cast<Index>(rng() % 2);
      const Index l = 2 + static_cast<Index>(rng() % (n_samples - 2));
      const auto inst = support::make_instance(rng, n_samples, n_labels, l, 2);

      require(support::min_eigenvalue(inst.gamma_a * inst.g +
                                      inst.gamma_i * inst.g * inst.m * inst.g) > 0.0,
              "coefficient Hessian positive definite");

      const Matrix s = build_s(inst.g, inst.m, inst.gamma_a, inst.gamma_i, inst.sel);
      const DualVariables dual = solve_dual_mu(s, inst.sel);
      const double ceiling = inst.sel.box_ceiling();
      require(dual.mu.minCoeff() >= 0.0 && dual.mu.maxCoeff() <= ceiling + 1e-12,
              "dual box feasibility");
      for (Index j = 0; j < inst.sel.n; ++j) {
        double balance = 0.0;
        for (Index i = 0; i < inst.sel.l; ++i) {
          balance += dual.mu[i * inst.sel.n + j] * inst.sel.yd[i * inst.sel.n + j];
        }
        require(std::abs(balance) <= 1e-8, "dual balance feasibility");
      }

      const Vector a = solve_a(inst.g, inst.m, dual.mu, inst.gamma_a, inst.gamma_i, inst.sel);
      const Matrix t = 2.0 * inst.gamma_a * Matrix::Identity(inst.g.rows(), inst.g.rows()) +
                       2.0 * inst.gamma_i * inst.m * inst.g;
      const Vector force = inst.sel.lift(dual.mu);
      require((inst.g * (t * a - force)).norm() <= 1e-6 * ((inst.g * force).norm() + 1e-12),
              "reduced Lagrangian stationarity");

      const SubproblemData data =
          compute_subproblem_data(a, dual.mu, inst.g_views, inst.g, inst.m_views, inst.m,
                                  inst.gamma_a, inst.gamma_i, inst.sel);
      const double gamma_b = std::exp(support::uniform(rng, std::log(1e-3), std::log(1.0)));
      const double gamma_c = std::exp(support::uniform(rng, std::log(1e-3), std::log(1.0)));
      require(support::min_eigenvalue(data.h_mat + gamma_b * Matrix::Identity(2, 2)) >=
                  gamma_b - 1e-9,
              "beta Hessian witness");

      Vector beta = support::random_simplex(rng, 2);
      Vector theta = support::random_simplex(rng, 2);
      const double before_b = beta_objective(data.h_mat, data.h, beta, gamma_b);
      beta_pair_update(data.h_mat, data.h, beta, gamma_b, 0, 1);
      require(beta_objective(data.h_mat, data.h, beta, gamma_b) <= before_b + 1e-12,
              "beta pair-update monotonicity");
      const double before_t = theta_objective(data.s, theta, gamma_c);
      theta_pair_update(data.s, theta, gamma_c, 0, 1);
      require(theta_objective(data.s, theta, gamma_c) <= before_t + 1e-12,
              "theta pair-update monotonicity");

      const Vector beta_star = update_beta(data.h_mat, data.h, beta, gamma_b);
      const Vector ref = oracles::simplex_quadratic_reference(
          data.h_mat + gamma_b * Matrix::Identity(2, 2), -data.h, uniform_weights(2));
      require(std::abs(beta_objective(data.h_mat, data.h, beta_star, gamma_b) -
                       beta_objective(data.h_mat, data.h, ref, gamma_b)) <= 1e-6,
              "beta fixed point vs simplex oracle");
      const Vector theta_star = update_theta(data.s, theta, gamma_c);
      const Vector ref_t = oracles::simplex_quadratic_reference(
          gamma_c * Matrix::Identity(2, 2), data.s, uniform_weights(2));
      require(std::abs(theta_objective(data.s, theta_star, gamma_c) -
                       theta_objective(data.s, ref_t, gamma_c)) <= 1e-6,
              "theta fixed point vs simplex oracle");
    }
  }
  return "1000 randomized cases across kernel, graph and optimizer invariants";
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {"dual QP oracle equivalence", criterion_dual_qp_oracle},
      {"weight subproblem oracle equivalence", criterion_weight_subproblem_oracle},
      {"Sylvester solve correctness", criterion_sylvester},
      {"Laplacian convex combination identity", criterion_laplacian_combination},
      {"alternating optimization convergence", criterion_convergence},
      {"multi-view enhancement over uniform weights", criterion_multiview_enhancement},
      {"initialization robustness", criterion_initialization_robustness},
      {"scalar Laplacian-SVM reduction", criterion_scalar_reduction},
      {"ranking metrics exactness", criterion_metrics_exactness},
      {"out-of-sample consistency", criterion_out_of_sample},
      {"randomized invariant suite", criterion_invariant_suite},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = criteria[i].run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() /
        1000.0;
    std::printf("[%2zu/11] %s  %s: %s (%.1f s)\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of 11 criteria FAILED\n", failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
