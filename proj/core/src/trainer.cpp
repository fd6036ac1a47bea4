#include "mvmr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mvmr/optimizer.hpp"

namespace mvmr {

std::string to_string(LossKind loss) {
  return loss == LossKind::Hinge ? "hinge" : "least_squares";
}

LossKind loss_from_string(const std::string& name) {
  if (name == "hinge") return LossKind::Hinge;
  if (name == "least_squares") return LossKind::LeastSquares;
  throw std::invalid_argument("unknown loss '" + name + "'");
}

void TrainConfig::validate() const {
  if (!(gamma_a > 0.0)) throw std::invalid_argument("gamma_a must be positive");
  if (!(gamma_i > 0.0)) throw std::invalid_argument("gamma_i must be positive");
  if (!(gamma_b > 0.0)) throw std::invalid_argument("gamma_b must be positive");
  if (!(gamma_c > 0.0)) throw std::invalid_argument("gamma_c must be positive");
  if (gamma_o < 0.0 || gamma_o > 1.0) throw std::invalid_argument("gamma_o must lie in [0, 1]");
  if (k_in < 1) throw std::invalid_argument("k_in must be positive");
  if (k_out < 1) throw std::invalid_argument("k_out must be positive");
  if (!(stop_threshold > 0.0)) throw std::invalid_argument("stop_threshold must be positive");
  if (max_outer_iter < 1) throw std::invalid_argument("max_outer_iter must be positive");
  if (ridge_scale < 0.0) throw std::invalid_argument("ridge_scale must be nonnegative");
}

void Dataset::validate() const {
  const Index n_total = total_samples();
  const Index n = label_count();
  if (n_total < 1 || n < 1) throw DataError("dataset has no samples or no labels");
  if (views.empty()) throw DataError("dataset has no views");
  for (const auto& view : views) {
    if (view.kind == ViewKind::Features) {
      if (view.data.rows() != n_total || view.data.cols() < 1) {
        throw DataError("view '" + view.name + "' feature matrix shape mismatch");
      }
    } else {
      if (view.data.rows() != n_total || view.data.cols() != n_total) {
        throw DataError("view '" + view.name + "' precomputed Gram must be N x N");
      }
      if ((view.data - view.data.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
        throw DataError("view '" + view.name + "' precomputed Gram is not symmetric");
      }
    }
  }

  std::set<Index> seen;
  auto check_indices = [&](const std::vector<Index>& idx, const std::string& which) {
    for (Index i : idx) {
      if (i < 0 || i >= n_total) {
        throw DataError(which + " index " + std::to_string(i) + " is out of range");
      }
      if (!seen.insert(i).second) {
        throw DataError("sample " + std::to_string(i) + " appears in more than one split");
      }
    }
  };
  check_indices(labeled, "labeled");
  check_indices(unlabeled, "unlabeled");
  check_indices(test, "test");
  if (labeled.empty()) throw DataError("dataset has no labeled samples");

  for (Index i = 0; i < n_total; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double y = labels(i, j);
      if (y != 1.0 && y != -1.0 && y != 0.0) {
        throw DataError("label entry at row " + std::to_string(i) + " is not in {+1, -1, 0}");
      }
    }
  }
  auto require_pm1 = [&](const std::vector<Index>& idx, const std::string& which) {
    for (Index i : idx) {
      for (Index j = 0; j < n; ++j) {
        if (labels(i, j) == 0.0) {
          throw DataError(which + " row " + std::to_string(i) + " has a zero label entry");
        }
      }
    }
  };
  require_pm1(labeled, "labeled");
  require_pm1(test, "test");
  for (Index i : unlabeled) {
    if (labels.row(i).cwiseAbs().maxCoeff() != 0.0) {
      throw DataError("unlabeled row " + std::to_string(i) + " has nonzero label entries");
    }
  }
}

Dataset with_labeled_subset(const Dataset& base, const std::vector<Index>& keep) {
  std::set<Index> keep_set(keep.begin(), keep.end());
  std::set<Index> pool(base.labeled.begin(), base.labeled.end());
  for (Index i : keep) {
    if (!pool.count(i)) {
      throw std::invalid_argument("subset index " + std::to_string(i) + " is not a labeled row");
    }
  }
  Dataset out = base;
  out.labeled = keep;
  for (Index i : base.labeled) {
    if (!keep_set.count(i)) {
      out.unlabeled.push_back(i);
      out.labels.row(i).setZero();
    }
  }
  return out;
}

namespace {

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

TrainedView make_trained_view(const ViewData& view, const std::vector<Index>& train_rows,
                              double ridge_scale) {
  TrainedView out;
  out.name = view.name;
  out.kind = view.kind;
  out.metric = view.metric;

  GramMatrix gram;
  if (view.kind == ViewKind::Features) {
    out.train_features = select_rows(view.data, train_rows);
    if (view.metric == DistanceMetric::PrecomputedLinear) {
      gram.k = linear_kernel(out.train_features, out.train_features);
    } else {
      gram = exp_kernel(pairwise_distance(out.train_features, out.train_features, view.metric));
    }
  } else {
    const Index nt = static_cast<Index>(train_rows.size());
    gram.k.resize(nt, nt);
    for (Index i = 0; i < nt; ++i) {
      for (Index j = 0; j < nt; ++j) {
        gram.k(i, j) = view.data(train_rows[static_cast<size_t>(i)],
                                 train_rows[static_cast<size_t>(j)]);
      }
    }
    gram.k = 0.5 * (gram.k + gram.k.transpose()).eval();
  }
  gram.view = view.name;
  gram.metric = view.metric;
  gram = unit_trace_normalize(std::move(gram));
  out.ridge = apply_psd_ridge(gram, ridge_scale);
  out.lambda = gram.lambda;
  out.trace_scale = gram.trace_scale;
  out.degenerate = gram.degenerate;
  out.gram = std::move(gram.k);
  return out;
}

Vector resolve_init(const std::vector<double>& init, Index v, const std::string& what) {
  if (init.empty()) return uniform_weights(v);
  if (static_cast<Index>(init.size()) != v) {
    throw std::invalid_argument(what + " initialization has the wrong length");
  }
  Vector w(v);
  for (Index i = 0; i < v; ++i) w[i] = init[static_cast<size_t>(i)];
  require_simplex(w, 1e-9, what + " initialization");
  return w;
}

double least_squares_objective(const Vector& a, const Matrix& g, const Matrix& m,
                               const Matrix& y_labeled, const Vector& beta, const Vector& theta,
                               const TrainConfig& cfg) {
  const Index n = y_labeled.cols();
  const Index l = y_labeled.rows();
  const Vector ga = g * a;
  const Matrix scores = unflatten(ga, n);
  double loss = 0.0;
  for (Index i = 0; i < l; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double r = y_labeled(i, j) - scores(i, j);
      loss += r * r;
    }
  }
  loss /= static_cast<double>(n * l);
  return loss + cfg.gamma_a * a.dot(ga) + cfg.gamma_i * ga.dot(m * ga) +
         cfg.gamma_b * beta.squaredNorm() + cfg.gamma_c * theta.squaredNorm();
}

ModelState fit_impl(const Dataset& data, const TrainConfig& cfg, bool freeze_weights) {
  cfg.validate();
  data.validate();

  const Index n = data.label_count();
  const Index v_count = data.view_count();
  std::vector<Index> train_rows = data.labeled;
  train_rows.insert(train_rows.end(), data.unlabeled.begin(), data.unlabeled.end());
  const Index l = static_cast<Index>(data.labeled.size());
  const Index n_train = static_cast<Index>(train_rows.size());
  if (cfg.k_in >= n_train) {
    throw std::invalid_argument("k_in must be smaller than the training sample count");
  }
  if (n > 1 && cfg.k_out >= n) {
    throw std::invalid_argument("k_out must be smaller than the label count");
  }

  ModelState model;
  model.loss = cfg.loss;
  model.config = cfg;
  model.n = n;
  model.l = l;
  model.train_count = n_train;
  model.train_rows = train_rows;

  const Matrix y_train = select_rows(data.labels, train_rows);
  const Matrix y_labeled = y_train.topRows(l);
  for (Index j = 0; j < n; ++j) {
    const double lo = y_labeled.col(j).minCoeff();
    const double hi = y_labeled.col(j).maxCoeff();
    if (lo == hi) {
      model.warnings.push_back("label " + std::to_string(j) +
                               " has a single class among the labeled samples");
    }
  }

  std::vector<GraphLaplacian> laplacians;
  for (const auto& view : data.views) {
    model.views.push_back(make_trained_view(view, train_rows, cfg.ridge_scale));
    if (model.views.back().degenerate) {
      model.warnings.push_back("view '" + view.name + "' has an all-ones degenerate kernel");
    }
    laplacians.push_back(
        scalar_laplacian(knn_adjacency(model.views.back().gram, cfg.k_in),
                         cfg.normalized_laplacian));
  }

  // Single-label problems have no output graph; the coupling is trivial.
  if (n == 1) {
    model.q = Matrix::Identity(1, 1);
  } else {
    model.q = build_q(output_laplacian_pinv(y_labeled, cfg.k_out, true), cfg.gamma_o).q;
    if (model.q.trace() < 1e-12) {
      model.warnings.push_back("output coupling Q is numerically zero; scores will be degenerate");
    }
  }

  Vector beta = resolve_init(cfg.beta_init, v_count, "beta");
  Vector theta = resolve_init(cfg.theta_init, v_count, "theta");
  if (freeze_weights) {
    beta = uniform_weights(v_count);
    theta = uniform_weights(v_count);
  }

  const Matrix identity_n = Matrix::Identity(n, n);
  std::vector<Matrix> g_views(static_cast<size_t>(v_count));
  std::vector<Matrix> m_views(static_cast<size_t>(v_count));
  for (Index v = 0; v < v_count; ++v) {
    g_views[static_cast<size_t>(v)] = kron_expand(model.views[static_cast<size_t>(v)].gram, model.q);
    m_views[static_cast<size_t>(v)] = kron_expand(laplacians[static_cast<size_t>(v)].l, identity_n);
  }

  auto combined_gk = [&](const Vector& b) {
    Matrix gk = Matrix::Zero(n_train, n_train);
    for (Index v = 0; v < v_count; ++v) gk += b[v] * model.views[static_cast<size_t>(v)].gram;
    return gk;
  };
  auto combined_lap = [&](const Vector& t) {
    Matrix lap = Matrix::Zero(n_train, n_train);
    for (Index v = 0; v < v_count; ++v) lap += t[v] * laplacians[static_cast<size_t>(v)].l;
    return lap;
  };

  Matrix gk = combined_gk(beta);
  Matrix g = kron_expand(gk, model.q);
  Matrix lap = combined_lap(theta);
  Matrix m = kron_expand(lap, identity_n);

  const SelectorMatrices sel = SelectorMatrices::from_labels(y_labeled, n_train);
  const Index nn = n * n_train;
  Vector a = Vector::Zero(nn);
  Vector bias = Vector::Zero(n);
  Vector mu = Vector::Zero(sel.dual_size());

  auto objective = [&]() {
    if (cfg.loss == LossKind::Hinge) {
      return objective_value(a, g, m, y_labeled, bias, beta, theta, cfg.gamma_a, cfg.gamma_i,
                             cfg.gamma_b, cfg.gamma_c);
    }
    return least_squares_objective(a, g, m, y_labeled, beta, theta, cfg);
  };

  model.objective_trace.push_back(objective());

  for (int iter = 1; iter <= cfg.max_outer_iter; ++iter) {
    Matrix scores;
    if (cfg.loss == LossKind::Hinge) {
      const ReducedSystem sys = ReducedSystem::assemble(g, m, cfg.gamma_a, cfg.gamma_i);
      const DualVariables dual = solve_dual_mu(sys.s_matrix(sel), sel, mu);
      mu = dual.mu;
      a = sys.coefficients(mu, sel);
      scores = unflatten(g * a, n);
      bias = compute_bias(scores.topRows(l), mu, y_labeled);
    } else {
      const Matrix coeff = solve_vvlrls_sylvester(gk, lap, model.q, y_train, cfg.gamma_a,
                                                  cfg.gamma_i, l);
      a = flatten(coeff);
      bias.setZero();
      scores = unflatten(g * a, n);
    }

    if (!freeze_weights && v_count > 1) {
      Vector force;
      if (cfg.loss == LossKind::Hinge) {
        force = sel.lift(mu);
      } else {
        // Least squares stationarity residual in place of Y_d mu.
        Vector residual(sel.dual_size());
        for (Index i = 0; i < l; ++i) {
          for (Index j = 0; j < n; ++j) {
            residual[i * n + j] = (y_labeled(i, j) - scores(i, j)) / static_cast<double>(n * l);
          }
        }
        force = Vector::Zero(nn);
        force.head(sel.dual_size()) = 2.0 * residual;
      }
      const SubproblemData sub =
          compute_subproblem_data_with_force(a, force, g_views, g, m_views, m, cfg.gamma_a,
                                             cfg.gamma_i);
      beta = update_beta(sub.h_mat, sub.h, beta, cfg.gamma_b);
      gk = combined_gk(beta);
      g = kron_expand(gk, model.q);

      const Vector s = theta_coefficients(a, g, m_views, cfg.gamma_i);
      theta = update_theta(s, theta, cfg.gamma_c);
      lap = combined_lap(theta);
      m = kron_expand(lap, identity_n);
    }

    model.objective_trace.push_back(objective());
    if (freeze_weights || v_count == 1) break;

    const size_t k = model.objective_trace.size() - 1;
    if (k >= 2) {
      const double o_k = model.objective_trace[k];
      const double numer = std::abs(o_k - model.objective_trace[k - 1]);
      const double denom = std::abs(o_k - model.objective_trace[0]);
      const bool converged = denom > 0.0 ? numer / denom < cfg.stop_threshold
                                         : numer <= 1e-12 * std::max(1.0, std::abs(o_k));
      if (converged) break;
    }
  }

  model.coeff = unflatten(a, n);
  model.bias = bias;
  model.beta = beta;
  model.theta = theta;
  return model;
}

}  // namespace

ModelState fit(const Dataset& data, const TrainConfig& cfg) { return fit_impl(data, cfg, false); }

ModelState fit_uniform_baseline(const Dataset& data, const TrainConfig& cfg) {
  return fit_impl(data, cfg, true);
}

Matrix ModelState::combined_train_gram() const {
  Matrix gk = Matrix::Zero(train_count, train_count);
  for (size_t v = 0; v < views.size(); ++v) gk += beta[static_cast<Index>(v)] * views[v].gram;
  return gk;
}

Matrix ModelState::transductive_scores() const {
  Matrix scores = combined_train_gram() * coeff * q;
  scores.rowwise() += bias.transpose();
  return scores;
}

Eigen::MatrixXi binary_predictions(const Matrix& scores) {
  Eigen::MatrixXi out(scores.rows(), scores.cols());
  for (Index i = 0; i < scores.rows(); ++i) {
    for (Index j = 0; j < scores.cols(); ++j) out(i, j) = scores(i, j) >= 0.0 ? 1 : -1;
  }
  return out;
}

Prediction predict(const ModelState& model, const std::vector<Matrix>& per_view_inputs) {
  if (per_view_inputs.size() != model.views.size()) {
    throw std::invalid_argument("one input block per view is required");
  }
  Index rows = -1;
  Matrix combined;
  for (size_t v = 0; v < model.views.size(); ++v) {
    const TrainedView& view = model.views[v];
    const Matrix& input = per_view_inputs[v];
    Matrix block;
    if (view.kind == ViewKind::Features) {
      if (input.cols() != view.train_features.cols()) {
        throw std::invalid_argument("view '" + view.name + "' has mismatched dimensionality");
      }
      block = cross_kernel(input, view.train_features, view.metric, view.lambda,
                           view.trace_scale);
    } else {
      if (input.cols() != model.train_count) {
        throw std::invalid_argument("view '" + view.name +
                                    "' kernel block must have one column per training sample");
      }
      block = input / view.trace_scale;
    }
    if (rows < 0) {
      rows = block.rows();
      combined = Matrix::Zero(rows, model.train_count);
    } else if (block.rows() != rows) {
      throw std::invalid_argument("view inputs have different row counts");
    }
    combined += model.beta[static_cast<Index>(v)] * block;
  }

  Prediction out;
  out.scores = combined * model.coeff * model.q;
  out.scores.rowwise() += model.bias.transpose();
  out.predictions = binary_predictions(out.scores);
  return out;
}

}  // namespace mvmr
