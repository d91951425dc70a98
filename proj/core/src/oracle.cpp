#include "robustml/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace robustml {

Vector sample_ball_surface(int dim, const NormBall& ball, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double eps = ball.radius;
  Vector v(dim);
  switch (ball.norm.tag()) {
    case NormKind::Tag::L2: {
      do {
        for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
      } while (v.norm() == 0.0);
      return (eps / v.norm()) * v;
    }
    case NormKind::Tag::Linf: {
      for (int i = 0; i < dim; ++i) v[i] = eps * unif(rng);
      std::uniform_int_distribution<int> pick(0, dim - 1);
      int j = pick(rng);
      v[j] = unif(rng) >= 0.0 ? eps : -eps;
      return v;
    }
    case NormKind::Tag::L1: {
      // exponential magnitudes normalize to a uniform simplex point
      std::exponential_distribution<double> expo(1.0);
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        v[i] = expo(rng);
        s += v[i];
      }
      for (int i = 0; i < dim; ++i) {
        double sign = unif(rng) >= 0.0 ? 1.0 : -1.0;
        v[i] = sign * eps * v[i] / s;
      }
      return v;
    }
    case NormKind::Tag::Lp: {
      do {
        for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
      } while (v.norm() == 0.0);
      return (eps / norm_value(v, ball.norm)) * v;
    }
  }
  throw InvalidInputError("unknown norm tag");
}

namespace {

// extreme points worth enumerating exactly: +-eps e_i for l1, sign corners for linf
void enumerate_vertices(int dim, const NormBall& ball,
                        const std::function<void(const Vector&)>& visit) {
  double eps = ball.radius;
  if (ball.norm.tag() == NormKind::Tag::L1 && dim <= 20) {
    Vector v = Vector::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      v[i] = eps;
      visit(v);
      v[i] = -eps;
      visit(v);
      v[i] = 0.0;
    }
  } else if (ball.norm.tag() == NormKind::Tag::Linf && dim <= 12) {
    Vector v(dim);
    for (long mask = 0; mask < (1L << dim); ++mask) {
      for (int i = 0; i < dim; ++i) v[i] = (mask >> i) & 1 ? eps : -eps;
      visit(v);
    }
  }
}

}  // namespace

OracleReport brute_force_ball_max(const std::function<double(const Vector&)>& objective,
                                  int dim, const NormBall& ball, long n_samples,
                                  int refine_steps, std::uint64_t seed,
                                  double analytic_value) {
  std::mt19937_64 rng(seed);
  OracleReport rep;
  rep.analytic_value = analytic_value;
  rep.best_delta = Vector::Zero(dim);
  rep.best_value = objective(rep.best_delta);
  rep.samples_used = 1;

  auto consider = [&](const Vector& v) {
    double val = objective(v);
    ++rep.samples_used;
    if (val > rep.best_value) {
      rep.best_value = val;
      rep.best_delta = v;
    }
  };

  if (ball.radius > 0.0) {
    for (long i = 0; i < n_samples; ++i) consider(sample_ball_surface(dim, ball, rng));
    enumerate_vertices(dim, ball, consider);

    // local coordinate search from the incumbent, projected back to the surface
    double step = ball.radius * 0.5;
    for (int r = 0; r < refine_steps; ++r) {
      for (int i = 0; i < dim; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vector cand = rep.best_delta;
          cand[i] += sgn * step;
          double n = norm_value(cand, ball.norm);
          if (n > 0.0) consider(Vector((ball.radius / n) * cand));
        }
      }
      step *= 0.5;
    }
  }

  rep.gap = analytic_value - rep.best_value;
  return rep;
}

FiniteDiffReport finite_diff_check(const std::function<double(const Vector&)>& fn,
                                   const std::function<Vector(const Vector&)>& grad,
                                   const Vector& point, double h) {
  if (!(h > 0.0)) throw InvalidInputError("finite_diff_check requires h > 0");
  Vector g = grad(point);
  FiniteDiffReport rep;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    Vector p = point, m = point;
    p[i] += h;
    m[i] -= h;
    double fp = fn(p), fm = fn(m), f0 = fn(point);
    double central = (fp - fm) / (2.0 * h);
    double fwd = (fp - f0) / h;
    double bwd = (f0 - fm) / h;
    // one-sided estimates disagreeing badly means the point straddles a kink
    if (std::abs(fwd - bwd) > 1e-2 * (1.0 + std::abs(central))) {
      ++rep.skipped;
      continue;
    }
    double err = std::abs(central - g[i]) / std::max(1.0, std::abs(g[i]));
    rep.max_rel_error = std::max(rep.max_rel_error, err);
  }
  return rep;
}

}  // namespace robustml
