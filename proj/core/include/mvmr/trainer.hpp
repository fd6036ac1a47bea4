#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvmr/graph.hpp"
#include "mvmr/kernels.hpp"
#include "mvmr/types.hpp"

namespace mvmr {

enum class LossKind { Hinge, LeastSquares };

std::string to_string(LossKind loss);
LossKind loss_from_string(const std::string& name);

enum class ViewKind { Features, PrecomputedGram };

/// One view of the dataset: either an N x d feature matrix with a distance
/// metric, or a precomputed N x N kernel matrix over all dataset rows.
struct ViewData {
  std::string name;
  ViewKind kind = ViewKind::Features;
  DistanceMetric metric = DistanceMetric::L2;
  Matrix data;
};

struct Dataset {
  std::vector<ViewData> views;
  Matrix labels;  // N x n with entries in {+1, -1, 0}; unlabeled rows all zero
  std::vector<Index> labeled;
  std::vector<Index> unlabeled;
  std::vector<Index> test;

  Index total_samples() const { return labels.rows(); }
  Index label_count() const { return labels.cols(); }
  Index view_count() const { return static_cast<Index>(views.size()); }

  void validate() const;
};

/// Copy of the dataset where only `keep` (a subset of the labeled rows)
/// stays labeled; the remaining labeled rows move to the unlabeled set and
/// their label entries are zeroed.
Dataset with_labeled_subset(const Dataset& base, const std::vector<Index>& keep);

struct TrainConfig {
  double gamma_a = 1e-4;  // ambient-norm regularization
  double gamma_i = 1e-4;  // manifold regularization
  double gamma_b = 1e-2;  // kernel-weight regularization
  double gamma_c = 1e-2;  // graph-weight regularization
  double gamma_o = 1.0;   // output-structure mixing, in [0, 1]
  int k_in = 10;          // neighbors for the input graphs
  int k_out = 2;          // neighbors for the output label graph
  LossKind loss = LossKind::Hinge;
  bool normalized_laplacian = true;
  double stop_threshold = 1e-3;
  int max_outer_iter = 50;
  double ridge_scale = 1e-8;
  std::uint64_t seed = 0;
  std::vector<double> beta_init;   // empty = uniform
  std::vector<double> theta_init;  // empty = uniform

  void validate() const;
};

/// Frozen per-view kernel state: everything needed to reproduce the training
/// Gram block and to evaluate the kernel on new rows.
struct TrainedView {
  std::string name;
  ViewKind kind = ViewKind::Features;
  DistanceMetric metric = DistanceMetric::L2;
  double lambda = 0.0;
  double trace_scale = 1.0;
  double ridge = 0.0;
  bool degenerate = false;
  Matrix train_features;  // empty for precomputed-gram views
  Matrix gram;            // normalized + ridged N x N training block
};

struct ModelState {
  LossKind loss = LossKind::Hinge;
  Index n = 0;            // labels
  Index l = 0;            // labeled training samples
  Index train_count = 0;  // labeled + unlabeled

  Matrix coeff;  // N x n; row i is the coefficient vector of sample i
  Vector bias;   // n
  Vector beta;
  Vector theta;
  Matrix q;  // n x n output coupling
  std::vector<TrainedView> views;
  std::vector<Index> train_rows;  // original dataset indices, labeled first
  std::vector<double> objective_trace;
  std::vector<std::string> warnings;
  TrainConfig config;

  Vector a_flat() const { return flatten(coeff); }
  Matrix combined_train_gram() const;  // sum_v beta_v * gram_v

  /// Scores on the training samples: G^k(beta) * A * Q + bias, row per sample.
  Matrix transductive_scores() const;
};

struct Prediction {
  Matrix scores;                // rows x n
  Eigen::MatrixXi predictions;  // sign of the scores, in {+1, -1}
};

/// Alternating optimization: solve for a (dual QP + linear solve for the
/// hinge loss, one Sylvester solve for least squares), then the beta and
/// theta coordinate-descent subproblems, until the objective ratio rule
/// |O_k - O_{k-1}| / |O_k - O_0| falls below the threshold.
ModelState fit(const Dataset& data, const TrainConfig& cfg);

/// Same pipeline with beta and theta frozen at 1/V and a single solve.
ModelState fit_uniform_baseline(const Dataset& data, const TrainConfig& cfg);

/// Inductive prediction. For feature views pass raw test features (rows x d);
/// for precomputed-gram views pass the raw kernel block between the new rows
/// and the training rows (rows x N), which is rescaled internally.
Prediction predict(const ModelState& model, const std::vector<Matrix>& per_view_inputs);

Eigen::MatrixXi binary_predictions(const Matrix& scores);

}  // namespace mvmr
