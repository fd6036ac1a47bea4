#include "mvmr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mvmr/graph.hpp"

namespace mvmr {

namespace {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

// Projects one label block onto {0 <= v <= ceiling} intersected with
// {y^T v = 0}. The hyperplane is affine, so only the box projection needs a
// Dykstra correction term. The iterate can sit still on a box face while the
// correction term accumulates, so the stopping test also requires the
// balance residual to vanish.
void project_label_block(Vector& v, const Vector& y, double ceiling) {
  const Index l = v.size();
  const double ynorm2 = static_cast<double>(l);  // entries are +-1
  Vector p = Vector::Zero(l);
  Vector prev = v;
  for (int iter = 0; iter < 100000; ++iter) {
    const Vector u = v - (y.dot(v) / ynorm2) * y;
    Vector w = (u + p).cwiseMax(0.0).cwiseMin(ceiling);
    p = u + p - w;
    const double change = (w - prev).cwiseAbs().maxCoeff();
    prev = w;
    v = std::move(w);
    if (change < 1e-14 && std::abs(y.dot(v)) < 1e-13) break;
  }
}

}  // namespace

SelectorMatrices SelectorMatrices::from_labels(const Matrix& y_labeled, Index total_samples) {
  SelectorMatrices sel;
  sel.n = y_labeled.cols();
  sel.l = y_labeled.rows();
  sel.total = total_samples;
  if (sel.l < 1 || sel.n < 1) throw std::invalid_argument("labeled matrix must be nonempty");
  if (total_samples < sel.l) {
    throw std::invalid_argument("total sample count is smaller than the labeled count");
  }
  sel.yd.resize(sel.n * sel.l);
  for (Index i = 0; i < sel.l; ++i) {
    for (Index j = 0; j < sel.n; ++j) {
      const double y = y_labeled(i, j);
      if (y != 1.0 && y != -1.0) {
        throw std::invalid_argument("labeled entries must be exactly +1 or -1");
      }
      sel.yd[i * sel.n + j] = y;
    }
  }
  return sel;
}

Vector SelectorMatrices::lift(const Vector& mu) const {
  if (mu.size() != dual_size()) throw std::invalid_argument("dual vector has the wrong length");
  Vector out = Vector::Zero(n * total);
  out.head(dual_size()) = yd.cwiseProduct(mu);
  return out;
}

ReducedSystem ReducedSystem::assemble(const Matrix& g, const Matrix& m, double gamma_a,
                                      double gamma_i) {
  if (!(gamma_a > 0.0)) throw std::invalid_argument("gamma_a must be positive");
  if (gamma_i < 0.0) throw std::invalid_argument("gamma_i must be nonnegative");
  const Index dim = g.rows();
  if (g.cols() != dim || m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument("G and M must be square with matching shapes");
  }
  ReducedSystem sys;
  sys.t_ = 2.0 * gamma_a * Matrix::Identity(dim, dim) + 2.0 * gamma_i * m * g;
  sys.g_ = g;
  sys.lu_.compute(sys.t_);
  return sys;
}

Matrix ReducedSystem::solve(const Matrix& rhs) const {
  Matrix x = lu_.solve(rhs);
  if (!x.allFinite() || (t_ * x - rhs).norm() > 1e-8 * rhs.norm()) {
    throw SolverError("reduced linear system is singular; the kernel ridge is insufficient");
  }
  return x;
}

Matrix ReducedSystem::s_matrix(const SelectorMatrices& sel) const {
  const Index nl = sel.dual_size();
  Matrix rhs = Matrix::Zero(t_.rows(), nl);
  rhs.topLeftCorner(nl, nl) = Matrix(sel.yd.asDiagonal());
  const Matrix x = solve(rhs);
  Matrix s = sel.yd.asDiagonal() * (g_.topRows(nl) * x);
  return 0.5 * (s + s.transpose());
}

Vector ReducedSystem::coefficients(const Vector& mu, const SelectorMatrices& sel) const {
  return solve(sel.lift(mu));
}

Matrix build_s(const Matrix& g, const Matrix& m, double gamma_a, double gamma_i,
               const SelectorMatrices& sel) {
  return ReducedSystem::assemble(g, m, gamma_a, gamma_i).s_matrix(sel);
}

Vector project_onto_dual_feasible(const Vector& x, const SelectorMatrices& sel) {
  if (x.size() != sel.dual_size()) throw std::invalid_argument("dual vector has the wrong length");
  const double ceiling = sel.box_ceiling();
  Vector out = x;
  for (Index j = 0; j < sel.n; ++j) {
    Vector block(sel.l), y(sel.l);
    for (Index i = 0; i < sel.l; ++i) {
      block[i] = x[i * sel.n + j];
      y[i] = sel.yd[i * sel.n + j];
    }
    // A single-class label admits only the zero block.
    if (y.minCoeff() > 0.0 || y.maxCoeff() < 0.0) {
      block.setZero();
    } else {
      project_label_block(block, y, ceiling);
    }
    for (Index i = 0; i < sel.l; ++i) out[i * sel.n + j] = block[i];
  }
  return out;
}

DualVariables solve_dual_mu(const Matrix& s, const SelectorMatrices& sel,
                            const Vector& warm_start, const DualControl& control) {
  const Index nl = sel.dual_size();
  if (s.rows() != nl || s.cols() != nl) throw std::invalid_argument("S has the wrong shape");
  const Matrix ssym = 0.5 * (s + s.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(ssym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("eigendecomposition of S failed");
  const double lambda_max = es.eigenvalues().maxCoeff();
  const double eta = 1.0 / std::max(lambda_max, 1e-12);

  Vector mu = warm_start.size() == nl ? project_onto_dual_feasible(warm_start, sel)
                                      : Vector::Zero(nl);
  DualVariables out;
  for (int iter = 1; iter <= control.max_iterations; ++iter) {
    const Vector grad = Vector::Ones(nl) - ssym * mu;
    Vector candidate = project_onto_dual_feasible(mu + eta * grad, sel);
    out.kkt_residual = (candidate - mu).cwiseAbs().maxCoeff();
    out.iterations = iter;
    mu = std::move(candidate);
    if (out.kkt_residual <= control.tol) {
      out.mu = std::move(mu);
      return out;
    }
  }
  throw SolverError("dual projected gradient did not reach the KKT tolerance within " +
                    std::to_string(control.max_iterations) + " iterations");
}

Vector solve_a(const Matrix& g, const Matrix& m, const Vector& mu, double gamma_a,
               double gamma_i, const SelectorMatrices& sel) {
  return ReducedSystem::assemble(g, m, gamma_a, gamma_i).coefficients(mu, sel);
}

Vector compute_bias(const Matrix& scores_labeled, const Vector& mu, const Matrix& y_labeled) {
  const Index l = y_labeled.rows();
  const Index n = y_labeled.cols();
  if (scores_labeled.rows() != l || scores_labeled.cols() != n) {
    throw std::invalid_argument("score matrix shape does not match the labels");
  }
  if (mu.size() != n * l) throw std::invalid_argument("dual vector has the wrong length");
  const double ceiling = 1.0 / static_cast<double>(n * l);

  Vector bias = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    std::vector<double> in_box, all;
    for (Index i = 0; i < l; ++i) {
      const double residual = y_labeled(i, j) - scores_labeled(i, j);
      all.push_back(residual);
      const double m_ij = mu[i * n + j];
      if (m_ij > 1e-10 && m_ij < ceiling - 1e-10) in_box.push_back(residual);
    }
    if (!in_box.empty()) {
      bias[j] = median(std::move(in_box));
    } else if (!all.empty()) {
      bias[j] = median(std::move(all));
    }
  }
  return bias;
}

SubproblemData compute_subproblem_data_with_force(const Vector& a, const Vector& force,
                                                  const std::vector<Matrix>& gs, const Matrix& g,
                                                  const std::vector<Matrix>& ms, const Matrix& m,
                                                  double gamma_a, double gamma_i) {
  const Index v_count = static_cast<Index>(gs.size());
  if (gs.size() != ms.size()) throw std::invalid_argument("view counts do not match");

  std::vector<Vector> w(gs.size());
  for (size_t v = 0; v < gs.size(); ++v) w[v] = gs[v] * a;

  SubproblemData data;
  data.h_mat.resize(v_count, v_count);
  data.h.resize(v_count);
  std::vector<Vector> mw(gs.size());
  for (size_t v = 0; v < gs.size(); ++v) mw[v] = m * w[v];
  for (Index i = 0; i < v_count; ++i) {
    for (Index j = 0; j < v_count; ++j) {
      data.h_mat(i, j) = gamma_i * w[static_cast<size_t>(i)].dot(mw[static_cast<size_t>(j)]);
    }
    data.h[i] = w[static_cast<size_t>(i)].dot(force) -
                gamma_a * a.dot(w[static_cast<size_t>(i)]);
  }
  data.h_mat = 0.5 * (data.h_mat + data.h_mat.transpose()).eval();
  data.s = theta_coefficients(a, g, ms, gamma_i);
  return data;
}

SubproblemData compute_subproblem_data(const Vector& a, const Vector& mu,
                                       const std::vector<Matrix>& gs, const Matrix& g,
                                       const std::vector<Matrix>& ms, const Matrix& m,
                                       double gamma_a, double gamma_i,
                                       const SelectorMatrices& sel) {
  return compute_subproblem_data_with_force(a, sel.lift(mu), gs, g, ms, m, gamma_a, gamma_i);
}

Vector theta_coefficients(const Vector& a, const Matrix& g, const std::vector<Matrix>& ms,
                          double gamma_i) {
  const Vector ga = g * a;
  Vector s(static_cast<Index>(ms.size()));
  for (size_t v = 0; v < ms.size(); ++v) {
    s[static_cast<Index>(v)] = gamma_i * ga.dot(ms[v] * ga);
  }
  return s;
}

double beta_objective(const Matrix& h_mat, const Vector& h, const Vector& beta, double gamma_b) {
  return beta.dot(h_mat * beta) + gamma_b * beta.squaredNorm() - h.dot(beta);
}

double theta_objective(const Vector& s, const Vector& theta, double gamma_c) {
  return s.dot(theta) + gamma_c * theta.squaredNorm();
}

void beta_pair_update(const Matrix& h_mat, const Vector& h, Vector& beta, double gamma_b,
                      Index i, Index j) {
  const double pair_sum = beta[i] + beta[j];
  if (pair_sum <= 0.0) {
    beta[i] = 0.0;
    beta[j] = 0.0;
    return;
  }
  const double delta = h_mat(i, i) - h_mat(j, i) - h_mat(i, j) + h_mat(j, j);
  double cross_i = 0.0, cross_j = 0.0;
  for (Index k = 0; k < beta.size(); ++k) {
    cross_i += (h_mat(i, k) - h_mat(j, k)) * beta[k];
    cross_j += (h_mat(j, k) - h_mat(i, k)) * beta[k];
  }
  const double t_ij = delta * beta[i] - cross_i;
  const double t_ji = delta * beta[j] - cross_j;
  const double num_i = 2.0 * gamma_b * pair_sum + (h[i] - h[j]) + 2.0 * t_ij;
  const double num_j = 2.0 * gamma_b * pair_sum + (h[j] - h[i]) + 2.0 * t_ji;
  if (num_i <= 0.0) {
    beta[i] = 0.0;
    beta[j] = pair_sum;
  } else if (num_j <= 0.0) {
    beta[j] = 0.0;
    beta[i] = pair_sum;
  } else {
    beta[i] = num_i / (2.0 * delta + 4.0 * gamma_b);
    beta[j] = pair_sum - beta[i];
  }
}

void theta_pair_update(const Vector& s, Vector& theta, double gamma_c, Index i, Index j) {
  const double pair_sum = theta[i] + theta[j];
  if (pair_sum <= 0.0) {
    theta[i] = 0.0;
    theta[j] = 0.0;
    return;
  }
  const double gap_ij = 2.0 * gamma_c * pair_sum + (s[j] - s[i]);
  const double gap_ji = 2.0 * gamma_c * pair_sum + (s[i] - s[j]);
  if (gap_ij <= 0.0) {
    theta[i] = 0.0;
    theta[j] = pair_sum;
  } else if (gap_ji <= 0.0) {
    theta[j] = 0.0;
    theta[i] = pair_sum;
  } else {
    theta[i] = gap_ij / (4.0 * gamma_c);
    theta[j] = pair_sum - theta[i];
  }
}

namespace {

template <typename PairUpdate>
Vector sweep_pairs(Vector weights, const CoordinateDescentControl& control, PairUpdate&& update) {
  const Index v = weights.size();
  for (int sweep = 0; sweep < control.max_sweeps; ++sweep) {
    const Vector before = weights;
    for (Index i = 0; i < v; ++i) {
      for (Index j = i + 1; j < v; ++j) update(weights, i, j);
    }
    if ((weights - before).cwiseAbs().maxCoeff() < control.tol) break;
  }
  return weights;
}

}  // namespace

Vector update_beta(const Matrix& h_mat, const Vector& h, Vector beta, double gamma_b,
                   const CoordinateDescentControl& control) {
  if (!(gamma_b > 0.0)) throw std::invalid_argument("gamma_b must be positive");
  if (h_mat.rows() != beta.size() || h_mat.cols() != beta.size() || h.size() != beta.size()) {
    throw std::invalid_argument("subproblem shapes do not match the weight count");
  }
  require_simplex(beta, 1e-9, "beta");
  return sweep_pairs(std::move(beta), control, [&](Vector& w, Index i, Index j) {
    beta_pair_update(h_mat, h, w, gamma_b, i, j);
  });
}

Vector update_theta(const Vector& s, Vector theta, double gamma_c,
                    const CoordinateDescentControl& control) {
  if (!(gamma_c > 0.0)) throw std::invalid_argument("gamma_c must be positive");
  if (s.size() != theta.size()) {
    throw std::invalid_argument("subproblem shapes do not match the weight count");
  }
  require_simplex(theta, 1e-9, "theta");
  return sweep_pairs(std::move(theta), control, [&](Vector& w, Index i, Index j) {
    theta_pair_update(s, w, gamma_c, i, j);
  });
}

Matrix solve_vvlrls_sylvester(const Matrix& gk, const Matrix& laplacian, const Matrix& q,
                              const Matrix& y, double gamma_a, double gamma_i, Index l) {
  const Index n_samples = gk.rows();
  const Index n_labels = q.rows();
  if (!(gamma_a > 0.0)) throw std::invalid_argument("gamma_a must be positive");
  if (gk.cols() != n_samples || laplacian.rows() != n_samples || laplacian.cols() != n_samples) {
    throw std::invalid_argument("G and L must be square with matching shapes");
  }
  if (q.cols() != n_labels || y.rows() != n_samples || y.cols() != n_labels) {
    throw std::invalid_argument("Q or Y shape mismatch");
  }
  if (l < 1 || l > n_samples) throw std::invalid_argument("labeled count out of range");

  const double scale = 1.0 / (static_cast<double>(l) * gamma_a);
  Matrix jl_gk = gk;
  jl_gk.bottomRows(n_samples - l).setZero();  // J_l^N G^k
  const Matrix c = scale * (jl_gk + static_cast<double>(l) * gamma_i * laplacian * gk);

  // Vectorizing C A Q + A = scale * Y columnwise gives (Q (x) C + I) vec(A).
  const Index dim = n_samples * n_labels;
  Matrix system = kron_expand(q, c) + Matrix::Identity(dim, dim);
  const Eigen::Map<const Vector> y_vec(y.data(), dim);
  Eigen::PartialPivLU<Matrix> lu(system);
  Vector x = lu.solve(scale * y_vec.eval());
  if (!x.allFinite() || (system * x - scale * y_vec).norm() > 1e-10 * std::max(1.0, y_vec.norm())) {
    throw SolverError("vectorized Sylvester system is singular");
  }
  Matrix a = Eigen::Map<const Matrix>(x.data(), n_samples, n_labels);

  const Matrix residual = -c * a * q - a + scale * y;
  const double bound = y.norm() > 0.0 ? 1e-8 * y.norm() : 1e-12;
  if (residual.norm() > bound) {
    throw SolverError("Sylvester solution failed the residual check");
  }
  return a;
}

double objective_value(const Vector& a, const Matrix& g, const Matrix& m,
                       const Matrix& y_labeled, const Vector& bias, const Vector& beta,
                       const Vector& theta, double gamma_a, double gamma_i, double gamma_b,
                       double gamma_c) {
  const Index n = y_labeled.cols();
  const Index l = y_labeled.rows();
  const Vector ga = g * a;
  const Matrix scores = unflatten(ga, n);

  double hinge = 0.0;
  for (Index i = 0; i < l; ++i) {
    for (Index j = 0; j < n; ++j) {
      hinge += std::max(0.0, 1.0 - y_labeled(i, j) * (scores(i, j) + bias[j]));
    }
  }
  hinge /= static_cast<double>(n * l);

  return hinge + gamma_a * a.dot(ga) + gamma_i * ga.dot(m * ga) + gamma_b * beta.squaredNorm() +
         gamma_c * theta.squaredNorm();
}

}  // namespace mvmr
