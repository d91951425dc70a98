#pragma once

#include <Eigen/Core>
#include <vector>

#include "robustml/norms.hpp"

namespace robustml {

/// Matrix with entries observed only on an index set P.
struct PartialMatrix {
  struct Entry {
    int row;
    int col;
    double value;
  };

  int rows = 0;
  int cols = 0;
  std::vector<Entry> observed;  // no duplicate (row, col) pairs

  void validate(bool require_pm1 = false) const;
};

/// Perturbation supported on (a subset of) the observed index set.
struct SparsePerturbation {
  std::vector<PartialMatrix::Entry> entries;

  double frobenius_norm() const;
  double value_at(int row, int col) const;  // 0 off support
};

/// Squared-loss attack, Frobenius budget: delta = eps * R / ||R||_F on P.
SparsePerturbation mc_attack_fro(const PartialMatrix& X, const Eigen::MatrixXd& Y, double eps);

/// Squared-loss attack, entry-wise budget: delta_ij = eps * sign(X_ij - Y_ij).
SparsePerturbation mc_attack_linf(const PartialMatrix& X, const Eigen::MatrixXd& Y, double eps);

/// Hinge-loss attack, Frobenius budget: sorted-scan support selection, then
/// delta_ij = -eps * Y_ij / sqrt(|P1|) on the selected support.
SparsePerturbation maxmargin_attack_fro(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                                        double eps);

/// Hinge-loss attack, entry-wise budget: delta_ij = -eps * Y_ij on P.
SparsePerturbation maxmargin_attack_linf(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                                         double eps);

/// sum over P of (X_ij + delta_ij - Y_ij)^2
double mc_squared_loss(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                       const SparsePerturbation& delta);

/// sum over P of max(0, 1 - (X_ij + delta_ij) * Y_ij)
double maxmargin_hinge_loss(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                            const SparsePerturbation& delta);

}  // namespace robustml
