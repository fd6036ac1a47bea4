#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mvmr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a numeric routine cannot produce a trustworthy result
/// (singular system, solver hit its iteration cap, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed files, shape mismatches and invalid dataset content.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_simplex(const Vector& w, double tol = 1e-9);
void require_simplex(const Vector& w, double tol, const std::string& what);
Vector uniform_weights(Index count);

// Vector-valued quantities use sample-major blocks of size n: the entry for
// sample i and label j sits at position i*n + j. These two helpers convert
// between that layout and an N x n matrix with one row per sample.
Matrix unflatten(const Vector& a, Index n_labels);
Vector flatten(const Matrix& per_sample);

}  // namespace mvmr
