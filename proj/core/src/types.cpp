#include "mvmr/types.hpp"

#include <cmath>

namespace mvmr {

bool is_simplex(const Vector& w, double tol) {
  if (w.size() == 0) return false;
  if (w.minCoeff() < -tol) return false;
  return std::abs(w.sum() - 1.0) <= tol;
}

void require_simplex(const Vector& w, double tol, const std::string& what) {
  if (!is_simplex(w, tol)) {
    throw std::invalid_argument(what + " must be on the probability simplex");
  }
}

Vector uniform_weights(Index count) {
  if (count < 1) throw std::invalid_argument("weight count must be positive");
  return Vector::Constant(count, 1.0 / static_cast<double>(count));
}

Matrix unflatten(const Vector& a, Index n_labels) {
  if (n_labels < 1 || a.size() % n_labels != 0) {
    throw std::invalid_argument("vector length is not a multiple of the label count");
  }
  const Index rows = a.size() / n_labels;
  Matrix out(rows, n_labels);
  for (Index i = 0; i < rows; ++i) {
    out.row(i) = a.segment(i * n_labels, n_labels).transpose();
  }
  return out;
}

Vector flatten(const Matrix& per_sample) {
  Vector out(per_sample.rows() * per_sample.cols());
  for (Index i = 0; i < per_sample.rows(); ++i) {
    out.segment(i * per_sample.cols(), per_sample.cols()) = per_sample.row(i).transpose();
  }
  return out;
}

}  // namespace mvmr
