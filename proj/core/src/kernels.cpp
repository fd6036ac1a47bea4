#include "mvmr/kernels.hpp"

#include <cmath>

namespace mvmr {

namespace {

void require_same_width(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("feature matrices have mismatched dimensionality");
  }
}

double chi_squared(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
  double d = 0.0;
  for (Index k = 0; k < x.size(); ++k) {
    const double sum = x[k] + y[k];
    if (sum > 0.0) {
      const double diff = x[k] - y[k];
      d += diff * diff / sum;
    }
  }
  return d;
}

}  // namespace

std::string to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::L1: return "l1";
    case DistanceMetric::L2: return "l2";
    case DistanceMetric::ChiSquared: return "chi2";
    case DistanceMetric::PrecomputedLinear: return "linear";
  }
  throw std::logic_error("unknown distance metric");
}

DistanceMetric distance_metric_from_string(const std::string& name) {
  if (name == "l1") return DistanceMetric::L1;
  if (name == "l2") return DistanceMetric::L2;
  if (name == "chi2") return DistanceMetric::ChiSquared;
  if (name == "linear") return DistanceMetric::PrecomputedLinear;
  throw std::invalid_argument("unknown distance metric '" + name + "'");
}

Matrix pairwise_distance(const Matrix& a, const Matrix& b, DistanceMetric metric) {
  require_same_width(a, b);
  if (metric == DistanceMetric::PrecomputedLinear) {
    throw std::invalid_argument("the linear kernel has no associated distance");
  }
  if (metric == DistanceMetric::ChiSquared && (a.minCoeff() < 0.0 || b.minCoeff() < 0.0)) {
    throw std::invalid_argument("chi-squared distance requires nonnegative inputs");
  }

  Matrix d(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) {
      switch (metric) {
        case DistanceMetric::L1:
          d(i, j) = (a.row(i) - b.row(j)).cwiseAbs().sum();
          break;
        case DistanceMetric::L2:
          d(i, j) = (a.row(i) - b.row(j)).norm();
          break;
        case DistanceMetric::ChiSquared:
          d(i, j) = chi_squared(a.row(i), b.row(j));
          break;
        default:
          break;
      }
    }
  }
  return d;
}

GramMatrix exp_kernel(const Matrix& d) {
  if (d.rows() != d.cols()) throw std::invalid_argument("distance matrix must be square");
  if (d.minCoeff() < 0.0) throw std::invalid_argument("distances must be nonnegative");
  if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("distance matrix must be symmetric");
  }
  if (d.diagonal().cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("distance matrix must have a zero diagonal");
  }

  GramMatrix g;
  g.lambda = d.maxCoeff();
  if (g.lambda <= 0.0) {
    // No usable bandwidth; every point coincides with every other.
    g.k = Matrix::Ones(d.rows(), d.cols());
    g.degenerate = true;
    return g;
  }
  g.k = (-d / g.lambda).array().exp().matrix();
  g.k = 0.5 * (g.k + g.k.transpose());
  return g;
}

Matrix linear_kernel(const Matrix& a, const Matrix& b) {
  require_same_width(a, b);
  return a * b.transpose();
}

GramMatrix unit_trace_normalize(GramMatrix g) {
  if (g.k.rows() != g.k.cols()) throw std::invalid_argument("Gram matrix must be square");
  if ((g.k - g.k.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, g.k.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("Gram matrix must be symmetric");
  }
  const double trace = g.k.trace();
  if (!(trace > 0.0)) {
    throw std::invalid_argument("Gram matrix trace must be positive for unit-trace normalization");
  }
  g.k /= trace;
  g.trace_scale *= trace;
  return g;
}

double apply_psd_ridge(GramMatrix& g, double ridge_scale) {
  if (ridge_scale < 0.0) throw std::invalid_argument("ridge scale must be nonnegative");
  const double ridge = ridge_scale * g.k.trace() / static_cast<double>(g.k.rows());
  g.k.diagonal().array() += ridge;
  return ridge;
}

GramMatrix combine_kernels(const std::vector<GramMatrix>& gs, const Vector& beta) {
  if (gs.empty()) throw std::invalid_argument("no kernels to combine");
  if (beta.size() != static_cast<Index>(gs.size())) {
    throw std::invalid_argument("weight count does not match the kernel count");
  }
  require_simplex(beta, 1e-9, "kernel weights");
  const Index rows = gs.front().k.rows();
  const Index cols = gs.front().k.cols();
  GramMatrix out;
  out.view = "combined";
  out.k = Matrix::Zero(rows, cols);
  for (size_t v = 0; v < gs.size(); ++v) {
    if (gs[v].k.rows() != rows || gs[v].k.cols() != cols) {
      throw std::invalid_argument("kernels to combine have mismatched shapes");
    }
    out.k += beta[static_cast<Index>(v)] * gs[v].k;
  }
  return out;
}

Matrix cross_kernel(const Matrix& test_features, const Matrix& train_features,
                    DistanceMetric metric, double lambda, double trace_scale) {
  if (!(trace_scale > 0.0)) throw std::invalid_argument("trace scale must be positive");
  if (metric == DistanceMetric::PrecomputedLinear) {
    return linear_kernel(test_features, train_features) / trace_scale;
  }
  const Matrix d = pairwise_distance(test_features, train_features, metric);
  if (lambda <= 0.0) {
    // Degenerate training kernel: all training distances were zero.
    return Matrix::Ones(d.rows(), d.cols()) / trace_scale;
  }
  return (-d / lambda).array().exp().matrix() / trace_scale;
}

}  // namespace mvmr
