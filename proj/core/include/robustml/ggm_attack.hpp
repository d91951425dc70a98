#pragma once

#include <Eigen/Core>

#include "robustml/attack_vector.hpp"
#include "robustml/norms.hpp"

namespace robustml {

/// Symmetric positive definite precision matrix with cached eigendecomposition.
class PrecisionMatrix {
 public:
  explicit PrecisionMatrix(const Eigen::MatrixXd& omega);

  const Eigen::MatrixXd& matrix() const { return omega_; }
  const Eigen::VectorXd& eigenvalues() const { return eigvals_; }   // ascending
  const Eigen::MatrixXd& eigenvectors() const { return eigvecs_; }  // orthonormal columns
  Eigen::Index size() const { return omega_.rows(); }
  double lambda_min() const { return eigvals_[0]; }
  double lambda_max() const { return eigvals_[eigvals_.size() - 1]; }

 private:
  Eigen::MatrixXd omega_;
  Eigen::VectorXd eigvals_;
  Eigen::MatrixXd eigvecs_;
};

/// Solution of the 1-D dual for the l2-ball quadratic attack.
struct DualScalarSolution {
  double mu = 0.0;          // feasible: mu >= lambda_max
  double dual_value = 0.0;  // g(mu) = -1/2 x'O(muI-O)^{-1}Ox - mu eps^2/2
  bool hard_case = false;
};

/// Output of the lifted SDP for the linf-ball quadratic attack.
struct SdpSolution {
  Eigen::MatrixXd Y;             // (p+1) x (p+1), PSD
  double primal_objective = 0.0; // <M, Y>
  double residual = 0.0;         // splitting residual at termination
  bool certified = true;         // residual below tolerance
};

/// Maximize (x+delta)' Omega (x+delta) over ||delta||_2 <= eps.
std::pair<AttackResult, DualScalarSolution> ggm_attack_l2(const Vector& x,
                                                          const PrecisionMatrix& omega,
                                                          double eps);

/// Maximize (x+delta)' Omega (x+delta) over ||delta||_inf <= eps via the lifted SDP.
std::pair<AttackResult, SdpSolution> ggm_attack_linf(const Vector& x,
                                                     const PrecisionMatrix& omega,
                                                     double eps);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& S);

}  // namespace robustml
