#pragma once

#include <vector>

#include "mvmr/types.hpp"

namespace mvmr {

/// Block selector J = [I 0] picking the nl labeled coordinates out of nN,
/// together with the diagonal Y_d of labeled targets (sample-major).
struct SelectorMatrices {
  Index n = 0;      // labels
  Index l = 0;      // labeled samples
  Index total = 0;  // labeled + unlabeled samples

  Vector yd;  // nl entries in {+1, -1}, yd[i*n + j] = y_ij

  static SelectorMatrices from_labels(const Matrix& y_labeled, Index total_samples);

  Index dual_size() const { return n * l; }
  double box_ceiling() const { return 1.0 / static_cast<double>(n * l); }

  /// J^T Y_d mu: lifts an nl dual vector into the nN coefficient space.
  Vector lift(const Vector& mu) const;
};

struct DualVariables {
  Vector mu;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// Coefficients of the two weight subproblems:
///   W(beta)  = beta^T H beta + gamma_b |beta|^2 - h^T beta
///   W(theta) = s^T theta + gamma_c |theta|^2
struct SubproblemData {
  Matrix h_mat;  // H_ij = gamma_i * a^T G_i M G_j a
  Vector h;      // h_v  = a^T G_v J^T Y_d mu - gamma_a * a^T G_v a
  Vector s;      // s_v  = gamma_i * a^T G M_v G a
};

struct DualControl {
  int max_iterations = 10000;
  double tol = 1e-8;  // on the projected-gradient fixed-point residual
};

struct CoordinateDescentControl {
  int max_sweeps = 1000;
  double tol = 1e-10;  // max weight change over a full pair sweep
};

/// Shared factorization of T = 2 gamma_a I + 2 gamma_i M G. T is not
/// symmetric in general, so a general LU factorization is used.
class ReducedSystem {
 public:
  static ReducedSystem assemble(const Matrix& g, const Matrix& m, double gamma_a, double gamma_i);

  /// Solves T X = rhs and verifies the residual against 1e-8 * |rhs|.
  Matrix solve(const Matrix& rhs) const;

  /// S = Y_d J G T^{-1} J^T Y_d, symmetrized.
  Matrix s_matrix(const SelectorMatrices& sel) const;

  /// a = T^{-1} J^T Y_d mu.
  Vector coefficients(const Vector& mu, const SelectorMatrices& sel) const;

 private:
  ReducedSystem() = default;
  Matrix t_;
  Matrix g_;
  Eigen::PartialPivLU<Matrix> lu_;
};

Matrix build_s(const Matrix& g, const Matrix& m, double gamma_a, double gamma_i,
               const SelectorMatrices& sel);

/// Exact projection onto the dual feasible set: the box [0, 1/(nl)]^{nl}
/// intersected with the n per-label balance hyperplanes. Labels whose
/// targets all share one sign admit only the zero block.
Vector project_onto_dual_feasible(const Vector& x, const SelectorMatrices& sel);

/// Maximizes mu^T 1 - 1/2 mu^T S mu over the dual feasible set by projected
/// gradient ascent with step 1/lambda_max(S); Dykstra-style alternating
/// box/hyperplane projections. Throws SolverError past the iteration cap.
DualVariables solve_dual_mu(const Matrix& s, const SelectorMatrices& sel,
                            const Vector& warm_start = Vector(),
                            const DualControl& control = DualControl());

Vector solve_a(const Matrix& g, const Matrix& m, const Vector& mu, double gamma_a,
               double gamma_i, const SelectorMatrices& sel);

/// Per-label bias: median residual y - f over in-box support vectors,
/// falling back to the median over all labeled samples.
Vector compute_bias(const Matrix& scores_labeled, const Vector& mu, const Matrix& y_labeled);

SubproblemData compute_subproblem_data(const Vector& a, const Vector& mu,
                                       const std::vector<Matrix>& gs, const Matrix& g,
                                       const std::vector<Matrix>& ms, const Matrix& m,
                                       double gamma_a, double gamma_i,
                                       const SelectorMatrices& sel);

/// Variant taking the already lifted force vector J^T Y_d mu (or a least
/// squares residual surrogate) instead of dual variables.
SubproblemData compute_subproblem_data_with_force(const Vector& a, const Vector& force,
                                                  const std::vector<Matrix>& gs, const Matrix& g,
                                                  const std::vector<Matrix>& ms, const Matrix& m,
                                                  double gamma_a, double gamma_i);

/// s_v = gamma_i * a^T G M_v G a for the theta subproblem.
Vector theta_coefficients(const Vector& a, const Matrix& g, const std::vector<Matrix>& ms,
                          double gamma_i);

double beta_objective(const Matrix& h_mat, const Vector& h, const Vector& beta, double gamma_b);
double theta_objective(const Vector& s, const Vector& theta, double gamma_c);

/// One clipped closed-form pair update; keeps beta_i + beta_j fixed and
/// minimizes W(beta) exactly along that segment.
void beta_pair_update(const Matrix& h_mat, const Vector& h, Vector& beta, double gamma_b,
                      Index i, Index j);
void theta_pair_update(const Vector& s, Vector& theta, double gamma_c, Index i, Index j);

/// Deterministic sweeps over all pairs (i, j), i < j, in index order,
/// repeated until the weights stop moving.
Vector update_beta(const Matrix& h_mat, const Vector& h, Vector beta, double gamma_b,
                   const CoordinateDescentControl& control = CoordinateDescentControl());
Vector update_theta(const Vector& s, Vector theta, double gamma_c,
                    const CoordinateDescentControl& control = CoordinateDescentControl());

/// Solves -(1/(l gamma_a)) (J_l^N G^k + l gamma_i L G^k) A Q - A
///        + (1/(l gamma_a)) Y = 0 for A (N x n) by explicit vectorization
/// into an nN x nN linear system.
Matrix solve_vvlrls_sylvester(const Matrix& gk, const Matrix& laplacian, const Matrix& q,
                              const Matrix& y, double gamma_a, double gamma_i, Index l);

/// Hinge primal value (1/nl) sum xi + gamma_a a^T G a + gamma_i a^T G M G a
/// + gamma_b |beta|^2 + gamma_c |theta|^2 with xi recomputed from margins.
double objective_value(const Vector& a, const Matrix& g, const Matrix& m,
                       const Matrix& y_labeled, const Vector& bias, const Vector& beta,
                       const Vector& theta, double gamma_a, double gamma_i, double gamma_b,
                       double gamma_c);

}  // namespace mvmr
