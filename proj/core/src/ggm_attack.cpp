#include "robustml/ggm_attack.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace robustml {

namespace {

double quad_objective(const Eigen::MatrixXd& omega, const Vector& x, const Vector& delta) {
  Vector xp = x + delta;
  return xp.dot(omega * xp);
}

}  // namespace

PrecisionMatrix::PrecisionMatrix(const Eigen::MatrixXd& omega) : omega_(omega) {
  if (omega.rows() != omega.cols() || omega.rows() < 1) {
    throw InvalidInputError("precision matrix must be square and nonempty");
  }
  double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidInputError("precision matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (omega + omega.transpose()));
  eigvals_ = es.eigenvalues();
  eigvecs_ = es.eigenvectors();
  if (!(eigvals_[0] > 0.0)) {
    throw InvalidInputError("precision matrix must be positive definite");
  }
}

std::pair<AttackResult, DualScalarSolution> ggm_attack_l2(const Vector& x,
                                                          const PrecisionMatrix& omega,
                                                          double eps) {
  if (x.size() != omega.size()) throw InvalidInputError("dimension mismatch");
  if (!(eps >= 0.0)) throw InvalidInputError("eps must be nonnegative");

  const Eigen::VectorXd& lam = omega.eigenvalues();
  const Eigen::MatrixXd& Q = omega.eigenvectors();
  const Eigen::Index p = omega.size();
  double lam_max = omega.lambda_max();

  AttackResult result;
  DualScalarSolution dual;

  if (eps == 0.0) {
    result.delta = Vector::Zero(p);
    result.objective = quad_objective(omega.matrix(), x, result.delta);
    dual.mu = lam_max;
    dual.dual_value = 0.0;
    return {result, dual};
  }

  Vector c = lam.cwiseProduct(Q.transpose() * x);  // Q' Omega x in the eigenbasis

  auto delta_norm = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      double d = mu - lam[i];
      s += (c[i] * c[i]) / (d * d);
    }
    return std::sqrt(s);
  };

  double lo = lam_max + 1e-12 * std::max(1.0, lam_max);
  double hi = lam_max + (omega.matrix() * x).norm() / eps + 1.0;

  if (delta_norm(lo) < eps) {
    // hard case: the stationary formula under-uses the budget at mu -> lambda_max;
    // complete with a top-eigenvector component
    dual.hard_case = true;
    dual.mu = lam_max;
    Vector coeff = Vector::Zero(p);
    double gap_tol = 1e-9 * std::max(1.0, lam_max);
    for (Eigen::Index i = 0; i < p; ++i) {
      if (lam_max - lam[i] > gap_tol) coeff[i] = c[i] / (lam_max - lam[i]);
    }
    Vector interior = Q * coeff;
    double theta2 = eps * eps - interior.squaredNorm();
    double theta = theta2 > 0.0 ? std::sqrt(theta2) : 0.0;
    Vector top = Q.col(p - 1);
    if (top.dot(x) < 0.0) theta = -theta;
    result.delta = interior + theta * top;
  } else {
    // ||delta(mu)|| - eps is strictly decreasing on (lambda_max, inf); bisect
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      (delta_norm(mid) > eps ? lo : hi) = mid;
    }
    dual.mu = 0.5 * (lo + hi);
    Vector coeff(p);
    for (Eigen::Index i = 0; i < p; ++i) coeff[i] = c[i] / (dual.mu - lam[i]);
    result.delta = Q * coeff;
  }

  double quad_dual = 0.0;  // x' Omega (mu I - Omega)^{-1} Omega x, pseudo-inverted
  for (Eigen::Index i = 0; i < p; ++i) {
    double d = dual.mu - lam[i];
    if (std::abs(d) > 1e-14 * std::max(1.0, lam_max)) quad_dual += c[i] * c[i] / d;
  }
  dual.dual_value = -0.5 * quad_dual - 0.5 * dual.mu * eps * eps;
  result.objective = quad_objective(omega.matrix(), x, result.delta);
  return {result, dual};
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& S) {
  double scale = S.size() == 0 ? 0.0 : S.cwiseAbs().maxCoeff();
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, scale)) {
    throw InvalidInputError("psd_project expects a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

std::pair<AttackResult, SdpSolution> ggm_attack_linf(const Vector& x,
                                                     const PrecisionMatrix& omega,
                                                     double eps) {
  if (x.size() != omega.size()) throw InvalidInputError("dimension mismatch");
  if (!(eps >= 0.0)) throw InvalidInputError("eps must be nonnegative");

  const Eigen::Index p = omega.size();
  const Eigen::Index n = p + 1;

  Eigen::MatrixXd M(n, n);
  M.topLeftCorner(p, p) = omega.matrix();
  M.topRightCorner(p, 1) = omega.matrix() * x;
  M.bottomLeftCorner(1, p) = (omega.matrix() * x).transpose();
  M(p, p) = 0.0;

  auto enforce_box = [&](Eigen::MatrixXd& T) {
    double e2 = eps * eps;
    T.topLeftCorner(p, p) = T.topLeftCorner(p, p).cwiseMax(-e2).cwiseMin(e2);
    T(p, p) = 1.0;
  };

  SdpSolution sdp;
  AttackResult result;

  if (eps == 0.0) {
    sdp.Y = Eigen::MatrixXd::Zero(n, n);
    sdp.Y(p, p) = 1.0;
    sdp.primal_objective = 0.0;
    result.delta = Vector::Zero(p);
    result.objective = quad_objective(omega.matrix(), x, result.delta);
    return {result, sdp};
  }

  // operator splitting: alternate PSD projection with box/anchor projection
  const double rho = 1.0;
  const int max_iter = 20000;
  const double stop_tol = 1e-9;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  Z(p, p) = 1.0;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Y = Z;
  double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  for (int it = 0; it < max_iter; ++it) {
    Y = psd_project(Z - U + M / rho);
    Eigen::MatrixXd Z_prev = Z;
    Z = Y + U;
    enforce_box(Z);
    U += Y - Z;
    double primal = (Y - Z).norm();
    double dual = rho * (Z - Z_prev).norm();
    sdp.residual = std::max(primal, dual) / scale;
    if (sdp.residual < stop_tol) break;
  }
  sdp.certified = sdp.residual <= 1e-4;

  // round the reported iterate into the feasible set: alternate box/anchor
  // clamping with PSD projection, ending on the PSD side so the matrix is PSD
  // to machine precision and the box/anchor violations are negligible
  for (int it = 0; it < 500; ++it) {
    enforce_box(Y);
    Y = psd_project(0.5 * (Y + Y.transpose()));
    double viol = std::abs(Y(p, p) - 1.0);
    viol = std::max(viol, (Y.topLeftCorner(p, p).cwiseAbs().array() - eps * eps).maxCoeff());
    if (viol < 1e-9) break;
  }
  sdp.Y = 0.5 * (Y + Y.transpose());
  sdp.primal_objective = (M.array() * sdp.Y.array()).sum();

  // rank-1 extraction plus sign rounding; the relaxation may not be rank-1, so
  // polish each rounded candidate by coordinate-wise corner flips (the
  // objective is convex, hence coordinatewise maximal at +-eps)
  auto polish = [&](Vector corner) {
    double best = quad_objective(omega.matrix(), x, corner);
    bool improved = true;
    while (improved) {
      improved = false;
      for (Eigen::Index i = 0; i < p; ++i) {
        Vector flipped = corner;
        flipped[i] = -flipped[i];
        double val = quad_objective(omega.matrix(), x, flipped);
        if (val > best + 1e-14 * std::max(1.0, std::abs(best))) {
          best = val;
          corner = flipped;
          improved = true;
        }
      }
    }
    return std::pair<Vector, double>(corner, best);
  };
  auto sign_corner = [eps](const Vector& v) {
    return Vector(v.unaryExpr([eps](double t) { return t >= 0.0 ? eps : -eps; }));
  };

  Vector delta_hat = sdp.Y.topRightCorner(p, 1);
  delta_hat = delta_hat.cwiseMax(-eps).cwiseMin(eps);
  result.delta = delta_hat;
  result.objective = quad_objective(omega.matrix(), x, delta_hat);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> yes(sdp.Y);
  Vector top = yes.eigenvectors().rightCols<1>().head(p);
  for (const Vector& seed : {sign_corner(delta_hat), sign_corner(top),
                             sign_corner(omega.matrix() * x)}) {
    auto [corner, val] = polish(seed);
    if (val > result.objective) {
      result.delta = corner;
      result.objective = val;
    }
  }
  return {result, sdp};
}

}  // namespace robustml
