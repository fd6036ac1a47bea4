#pragma once

#include <vector>

#include "mvmr/kernels.hpp"
#include "mvmr/types.hpp"

namespace mvmr {

/// Symmetric nonnegative adjacency built with the k-nearest-neighbor OR rule:
/// an edge exists when either endpoint lists the other among its k nearest.
struct AdjacencyGraph {
  Matrix w;
  int k = 0;
};

struct GraphLaplacian {
  Matrix l;
  bool normalized = false;
};

/// Output coupling Q = gamma_o * pinv(L_out) + (1 - gamma_o) * I.
struct OutputStructure {
  Matrix l_out_pinv;
  Matrix q;
  double gamma_o = 0.0;
};

/// Lazy Kronecker factor pair; realize() materializes base (x) multiplier
/// with sample-major blocks of size multiplier.rows().
struct KroneckerOperator {
  Matrix base;
  Matrix multiplier;
  Matrix realize() const;
  Vector apply(const Vector& x) const;
};

/// Neighbors are ranked by similarity, ties broken by smaller index.
/// Negative similarities contribute zero edge weight.
AdjacencyGraph knn_adjacency(const Matrix& similarity, int k);
AdjacencyGraph knn_adjacency(const GramMatrix& similarity, int k);

/// Unnormalized: L = D - W. Normalized: L = I - D^{-1/2} W D^{-1/2} with
/// isolated vertices mapped to identity rows.
GraphLaplacian scalar_laplacian(const AdjacencyGraph& graph, bool normalized);

GraphLaplacian combine_laplacians(const std::vector<GraphLaplacian>& ls, const Vector& theta);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix; eigenvalues below
/// rel_cutoff times the largest are treated as zero.
Matrix pseudo_inverse(const Matrix& sym, double rel_cutoff = 1e-10);

/// Cosine similarity between +-1 label columns over labeled rows, clipped
/// at zero.
Matrix label_similarity(const Matrix& y_labeled);

/// Builds the label graph over the n columns of y (rows with any nonzero
/// entry count as labeled), its Laplacian, and returns the pseudo-inverse.
Matrix output_laplacian_pinv(const Matrix& y, int k_out, bool normalized = true);

OutputStructure build_q(const Matrix& l_out_pinv, double gamma_o);

/// Standard Kronecker product: block (i, j) equals base(i,j) * multiplier.
Matrix kron_expand(const Matrix& base, const Matrix& multiplier);

}  // namespace mvmr
