#include "robustml/mc_attack.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace robustml {

void PartialMatrix::validate(bool require_pm1) const {
  std::set<std::pair<int, int>> seen;
  for (const Entry& e : observed) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw InvalidInputError("observed index out of range");
    }
    if (!seen.insert({e.row, e.col}).second) {
      throw InvalidInputError("duplicate observed entry");
    }
    if (!std::isfinite(e.value)) throw InvalidInputError("non-finite observed value");
    if (require_pm1 && e.value != 1.0 && e.value != -1.0) {
      throw InvalidInputError("max-margin labels must be exactly +1 or -1");
    }
  }
}

double SparsePerturbation::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.value * e.value;
  return std::sqrt(s);
}

double SparsePerturbation::value_at(int row, int col) const {
  for (const auto& e : entries) {
    if (e.row == row && e.col == col) return e.value;
  }
  return 0.0;
}

namespace {

void check_shapes(const PartialMatrix& X, const Eigen::MatrixXd& Y, double eps) {
  if (Y.rows() != X.rows || Y.cols() != X.cols) throw InvalidInputError("shape mismatch");
  if (!(eps >= 0.0)) throw InvalidInputError("eps must be nonnegative");
}

}  // namespace

SparsePerturbation mc_attack_fro(const PartialMatrix& X, const Eigen::MatrixXd& Y, double eps) {
  check_shapes(X, Y, eps);
  X.validate();
  SparsePerturbation out;
  if (X.observed.empty() || eps == 0.0) {
    if (eps == 0.0) {
      for (const auto& e : X.observed) out.entries.push_back({e.row, e.col, 0.0});
    }
    return out;
  }
  double rnorm = 0.0;
  for (const auto& e : X.observed) {
    double r = e.value - Y(e.row, e.col);
    rnorm += r * r;
  }
  rnorm = std::sqrt(rnorm);
  if (rnorm > 0.0) {
    for (const auto& e : X.observed) {
      out.entries.push_back({e.row, e.col, eps * (e.value - Y(e.row, e.col)) / rnorm});
    }
  } else {
    // zero residual everywhere: any full-budget perturbation is optimal; spread evenly
    double v = eps / std::sqrt(static_cast<double>(X.observed.size()));
    for (const auto& e : X.observed) out.entries.push_back({e.row, e.col, v});
  }
  return out;
}

SparsePerturbation mc_attack_linf(const PartialMatrix& X, const Eigen::MatrixXd& Y, double eps) {
  check_shapes(X, Y, eps);
  X.validate();
  SparsePerturbation out;
  for (const auto& e : X.observed) {
    double r = e.value - Y(e.row, e.col);
    double s = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 1.0);  // zero residual: '+' endpoint
    out.entries.push_back({e.row, e.col, eps * s});
  }
  return out;
}

SparsePerturbation maxmargin_attack_fro(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                                        double eps) {
  check_shapes(X, Y, eps);
  X.validate(/*require_pm1=*/true);
  SparsePerturbation out;
  const size_t n = X.observed.size();
  if (n == 0) return out;

  // sort by Z_ij = X_ij * Y_ij ascending; ties by (row, col) for determinism
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  auto z_of = [&](size_t i) {
    const auto& e = X.observed[i];
    return e.value * Y(e.row, e.col);
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    double za = z_of(a), zb = z_of(b);
    if (za != zb) return za < zb;
    const auto& ea = X.observed[a];
    const auto& eb = X.observed[b];
    return std::pair(ea.row, ea.col) < std::pair(eb.row, eb.col);
  });

  size_t support = 0;
  if (eps > 0.0) {
    double z_min = z_of(order.front());
    double z_max = z_of(order.back());
    if (z_min >= 1.0 + eps) {
      support = 0;  // no entry can be made lossy within budget
    } else if (z_max <= 1.0) {
      support = n;  // every entry is already lossy
    } else {
      size_t k = 0;
      while (k < n && z_of(order[k]) <= 1.0) ++k;
      support = k;
      if (k < n && z_of(order[k]) <= 1.0 + eps / std::sqrt(static_cast<double>(k + 1))) {
        // largest i with Z_(i) <= 1 + eps/sqrt(i), scanned over the middle set
        for (size_t i = k + 1; i <= n; ++i) {
          double z = z_of(order[i - 1]);
          if (z >= 1.0 + eps) break;
          if (z <= 1.0 + eps / std::sqrt(static_cast<double>(i))) support = i;
        }
      }
    }
  }

  std::vector<char> in_support(n, 0);
  for (size_t i = 0; i < support; ++i) in_support[order[i]] = 1;
  double scale = support > 0 ? eps / std::sqrt(static_cast<double>(support)) : 0.0;
  for (size_t i = 0; i < n; ++i) {
    const auto& e = X.observed[i];
    double v = in_support[i] ? -scale * Y(e.row, e.col) : 0.0;
    out.entries.push_back({e.row, e.col, v});
  }
  return out;
}

SparsePerturbation maxmargin_attack_linf(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                                         double eps) {
  check_shapes(X, Y, eps);
  X.validate(/*require_pm1=*/true);
  SparsePerturbation out;
  for (const auto& e : X.observed) {
    out.entries.push_back({e.row, e.col, -eps * Y(e.row, e.col)});
  }
  return out;
}

double mc_squared_loss(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                       const SparsePerturbation& delta) {
  double s = 0.0;
  for (const auto& e : X.observed) {
    double r = e.value + delta.value_at(e.row, e.col) - Y(e.row, e.col);
    s += r * r;
  }
  return s;
}

double maxmargin_hinge_loss(const PartialMatrix& X, const Eigen::MatrixXd& Y,
                            const SparsePerturbation& delta) {
  double s = 0.0;
  for (const auto& e : X.observed) {
    double m = 1.0 - (e.value + delta.value_at(e.row, e.col)) * Y(e.row, e.col);
    s += std::max(0.0, m);
  }
  return s;
}

}  // namespace robustml
