#pragma once

#include <string>
#include <vector>

#include "mvmr/types.hpp"

namespace mvmr {

enum class DistanceMetric { L1, L2, ChiSquared, PrecomputedLinear };

std::string to_string(DistanceMetric metric);
DistanceMetric distance_metric_from_string(const std::string& name);

/// Dense scalar kernel matrix for one view together with the constants
/// needed to evaluate the same kernel on out-of-sample rows.
struct GramMatrix {
  Matrix k;
  std::string view;
  DistanceMetric metric = DistanceMetric::L2;
  double lambda = 0.0;       // frozen exp-kernel bandwidth, 0 when unused
  double trace_scale = 1.0;  // factor divided out of the raw kernel so far
  bool degenerate = false;   // all distances were zero, kernel is all ones
};

/// Pairwise distances between the rows of a and b.
/// L1: sum |x-y|, L2: euclidean, ChiSquared: sum (x-y)^2/(x+y) with 0/0 -> 0.
Matrix pairwise_distance(const Matrix& a, const Matrix& b, DistanceMetric metric);

/// exp(-d/lambda) with lambda = max_{ij} d. An all-zero distance matrix has
/// no usable bandwidth; the kernel degenerates to all ones and is flagged.
GramMatrix exp_kernel(const Matrix& d);

/// Plain inner products between the rows of a and b.
Matrix linear_kernel(const Matrix& a, const Matrix& b);

/// Scales the kernel so its trace is exactly one. Idempotent.
GramMatrix unit_trace_normalize(GramMatrix g);

/// Adds ridge_scale * trace(k)/N to the diagonal so the kernel is strictly
/// positive definite. Returns the ridge value that was added.
double apply_psd_ridge(GramMatrix& g, double ridge_scale);

/// Convex combination sum_v beta_v * G_v of same-shape kernels.
GramMatrix combine_kernels(const std::vector<GramMatrix>& gs, const Vector& beta);

/// Kernel block between new rows and the training rows, using the frozen
/// bandwidth and divided by the same trace factor as the training block.
Matrix cross_kernel(const Matrix& test_features, const Matrix& train_features,
                    DistanceMetric metric, double lambda, double trace_scale);

}  // namespace mvmr
