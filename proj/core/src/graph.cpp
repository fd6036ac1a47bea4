#include "mvmr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvmr {

Matrix KroneckerOperator::realize() const { return kron_expand(base, multiplier); }

Vector KroneckerOperator::apply(const Vector& x) const {
  const Index nb = multiplier.rows();
  const Index nn = base.rows();
  if (x.size() != nb * nn) throw std::invalid_argument("vector length does not match the operator");
  // (B (x) Q) x computed blockwise: out_i = sum_j B(i,j) * Q * x_j.
  Matrix xs(nb, nn);
  for (Index j = 0; j < nn; ++j) xs.col(j) = x.segment(j * nb, nb);
  const Matrix ys = multiplier * xs * base.transpose();
  Vector out(nb * nn);
  for (Index i = 0; i < nn; ++i) out.segment(i * nb, nb) = ys.col(i);
  return out;
}

AdjacencyGraph knn_adjacency(const Matrix& similarity, int k) {
  const Index n = similarity.rows();
  if (similarity.cols() != n) throw std::invalid_argument("similarity matrix must be square");
  if (k < 1 || k >= n) throw std::invalid_argument("neighbor count must satisfy 1 <= k < N");
  if ((similarity - similarity.transpose()).cwiseAbs().maxCoeff() >
      1e-8 * std::max(1.0, similarity.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("similarity matrix must be symmetric");
  }

  // nearest[i][j]: j is among the k most similar points to i
  // (ties broken by smaller index).
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> nearest(n, n);
  nearest.setConstant(false);
  std::vector<Index> order(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    order.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (similarity(i, a) != similarity(i, b)) return similarity(i, a) > similarity(i, b);
      return a < b;
    });
    for (int t = 0; t < k; ++t) nearest(i, order[static_cast<size_t>(t)]) = true;
  }

  AdjacencyGraph graph;
  graph.k = k;
  graph.w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (nearest(i, j) || nearest(j, i)) {
        const double w = std::max(similarity(i, j), 0.0);
        graph.w(i, j) = w;
        graph.w(j, i) = w;
      }
    }
  }
  return graph;
}

AdjacencyGraph knn_adjacency(const GramMatrix& similarity, int k) {
  return knn_adjacency(similarity.k, k);
}

GraphLaplacian scalar_laplacian(const AdjacencyGraph& graph, bool normalized) {
  const Index n = graph.w.rows();
  const Vector degree = graph.w.rowwise().sum();
  GraphLaplacian out;
  out.normalized = normalized;
  if (!normalized) {
    out.l = Matrix(degree.asDiagonal());
    out.l -= graph.w;
  } else {
    // Isolated vertices get an identity row: their scaling factor is zero,
    // so I - S W S leaves exactly the diagonal one.
    Vector inv_sqrt(n);
    for (Index i = 0; i < n; ++i) {
      inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
    }
    out.l = Matrix::Identity(n, n) -
            inv_sqrt.asDiagonal() * graph.w * inv_sqrt.asDiagonal();
  }
  out.l = 0.5 * (out.l + out.l.transpose());
  return out;
}

GraphLaplacian combine_laplacians(const std::vector<GraphLaplacian>& ls, const Vector& theta) {
  if (ls.empty()) throw std::invalid_argument("no Laplacians to combine");
  if (theta.size() != static_cast<Index>(ls.size())) {
    throw std::invalid_argument("weight count does not match the Laplacian count");
  }
  require_simplex(theta, 1e-9, "graph weights");
  const Index n = ls.front().l.rows();
  GraphLaplacian out;
  out.normalized = ls.front().normalized;
  out.l = Matrix::Zero(n, n);
  for (size_t v = 0; v < ls.size(); ++v) {
    if (ls[v].l.rows() != n || ls[v].l.cols() != n) {
      throw std::invalid_argument("Laplacians to combine have mismatched shapes");
    }
    out.l += theta[static_cast<Index>(v)] * ls[v].l;
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& sym, double rel_cutoff) {
  if (sym.rows() != sym.cols()) throw std::invalid_argument("pseudo-inverse input must be square");
  const Matrix s = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) throw SolverError("eigendecomposition failed");
  const Vector& vals = es.eigenvalues();
  const double cutoff = rel_cutoff * vals.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i]) > cutoff) inv[i] = 1.0 / vals[i];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Matrix label_similarity(const Matrix& y_labeled) {
  const Index n = y_labeled.cols();
  Matrix sim = Matrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      const double na = y_labeled.col(a).norm();
      const double nb = y_labeled.col(b).norm();
      double c = 0.0;
      if (na > 0.0 && nb > 0.0) {
        c = y_labeled.col(a).dot(y_labeled.col(b)) / (na * nb);
      }
      c = std::max(c, 0.0);
      sim(a, b) = c;
      sim(b, a) = c;
    }
  }
  return sim;
}

Matrix output_laplacian_pinv(const Matrix& y, int k_out, bool normalized) {
  const Index n = y.cols();
  if (k_out < 1 || k_out >= n) {
    throw std::invalid_argument("output neighbor count must satisfy 1 <= k_out < n");
  }
  std::vector<Index> labeled;
  for (Index i = 0; i < y.rows(); ++i) {
    if (y.row(i).cwiseAbs().maxCoeff() > 0.0) labeled.push_back(i);
  }
  if (labeled.empty()) throw std::invalid_argument("label matrix has no labeled row");
  Matrix yl(static_cast<Index>(labeled.size()), n);
  for (size_t r = 0; r < labeled.size(); ++r) yl.row(static_cast<Index>(r)) = y.row(labeled[r]);

  const Matrix sim = label_similarity(yl);
  const AdjacencyGraph adj = knn_adjacency(sim, k_out);
  const GraphLaplacian lap = scalar_laplacian(adj, normalized);
  return pseudo_inverse(lap.l, 1e-10);
}

OutputStructure build_q(const Matrix& l_out_pinv, double gamma_o) {
  if (gamma_o < 0.0 || gamma_o > 1.0) {
    throw std::invalid_argument("gamma_o must lie in [0, 1]");
  }
  if (l_out_pinv.rows() != l_out_pinv.cols()) {
    throw std::invalid_argument("pseudo-inverse must be square");
  }
  OutputStructure out;
  out.gamma_o = gamma_o;
  out.l_out_pinv = l_out_pinv;
  out.q = gamma_o * l_out_pinv +
          (1.0 - gamma_o) * Matrix::Identity(l_out_pinv.rows(), l_out_pinv.cols());
  out.q = 0.5 * (out.q + out.q.transpose());
  return out;
}

Matrix kron_expand(const Matrix& base, const Matrix& multiplier) {
  Matrix out(base.rows() * multiplier.rows(), base.cols() * multiplier.cols());
  for (Index i = 0; i < base.rows(); ++i) {
    for (Index j = 0; j < base.cols(); ++j) {
      out.block(i * multiplier.rows(), j * multiplier.cols(), multiplier.rows(),
                multiplier.cols()) = base(i, j) * multiplier;
    }
  }
  return out;
}

}  // namespace mvmr
