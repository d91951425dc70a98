#include "robustml/norms.hpp"

#include <cmath>

namespace robustml {

namespace {

void check_finite(const Vector& x) {
  if (!x.allFinite()) throw InvalidInputError("non-finite entries in vector");
}

}  // namespace

NormKind NormKind::dual() const {
  switch (tag_) {
    case Tag::L1: return linf();
    case Tag::L2: return l2();
    case Tag::Linf: return l1();
    case Tag::Lp: return lp(q());
  }
  throw InvalidInputError("unknown norm tag");
}

const char* NormKind::name() const {
  switch (tag_) {
    case Tag::L1: return "l1";
    case Tag::L2: return "l2";
    case Tag::Linf: return "linf";
    case Tag::Lp: return "lp";
  }
  return "?";
}

double norm_value(const Vector& x, NormKind norm) {
  check_finite(x);
  switch (norm.tag()) {
    case NormKind::Tag::L1: return x.lpNorm<1>();
    case NormKind::Tag::L2: return x.norm();
    case NormKind::Tag::Linf: return x.size() == 0 ? 0.0 : x.lpNorm<Eigen::Infinity>();
    case NormKind::Tag::Lp: {
      // rescale by the max to avoid overflow for large p
      double m = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        s += std::pow(std::abs(x[i]) / m, norm.p());
      }
      return m * std::pow(s, 1.0 / norm.p());
    }
  }
  throw InvalidInputError("unknown norm tag");
}

double dual_norm_value(const Vector& x, NormKind norm) {
  return norm_value(x, norm.dual());
}

DualDirection dual_subgradient(const Vector& w, NormKind norm) {
  check_finite(w);
  if (norm_value(w, NormKind::linf()) == 0.0) {
    throw DegenerateDirectionError("dual_subgradient undefined at w = 0");
  }
  DualDirection out;
  switch (norm.tag()) {
    case NormKind::Tag::L2:
      out.v = w / w.norm();
      break;
    case NormKind::Tag::Linf: {
      // dual is l1; subgradient of ||w||_1 is sign(w), with sign(0) = 0
      out.v = w.unaryExpr([](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
      break;
    }
    case NormKind::Tag::L1: {
      // dual is linf; pick the lowest index attaining max |w_i|
      Eigen::Index best = 0;
      double best_abs = std::abs(w[0]);
      bool tie = false;
      for (Eigen::Index i = 1; i < w.size(); ++i) {
        double a = std::abs(w[i]);
        if (a > best_abs) {
          best = i;
          best_abs = a;
          tie = false;
        } else if (a == best_abs) {
          tie = true;
        }
      }
      out.v = Vector::Zero(w.size());
      out.v[best] = w[best] > 0.0 ? 1.0 : -1.0;
      out.tie_broken = tie;
      break;
    }
    case NormKind::Tag::Lp: {
      double q = norm.q();
      double wq = norm_value(w, NormKind::lp(q));
      out.v = w.unaryExpr([q, wq](double t) {
        double s = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
        return s * std::pow(std::abs(t) / wq, q - 1.0);
      });
      break;
    }
  }
  return out;
}

Vector scale_to_budget(const DualDirection& dir, const NormBall& ball) {
  if (ball.radius == 0.0) return Vector::Zero(dir.v.size());
  double n = norm_value(dir.v, ball.norm);
  if (n == 0.0) {
    throw DegenerateDirectionError("scale_to_budget: zero direction with positive budget");
  }
  return (ball.radius / n) * dir.v;
}

}  // namespace robustml
