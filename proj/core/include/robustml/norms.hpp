#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace robustml {

using Vector = Eigen::VectorXd;

/// Thrown when an attack direction is requested for a zero vector.
struct DegenerateDirectionError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown on non-finite or otherwise malformed inputs.
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Vector norm family: L1, L2, Linf or a general Lp with p > 1.
class NormKind {
 public:
  enum class Tag { L1, L2, Linf, Lp };

  static NormKind l1() { return NormKind(Tag::L1, 1.0); }
  static NormKind l2() { return NormKind(Tag::L2, 2.0); }
  static NormKind linf() { return NormKind(Tag::Linf, 0.0); }
  static NormKind lp(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      throw InvalidInputError("NormKind::lp requires finite p > 1");
    }
    return NormKind(Tag::Lp, p);
  }

  Tag tag() const { return tag_; }
  double p() const { return p_; }
  /// Holder conjugate exponent q with 1/p + 1/q = 1 (only meaningful for Lp).
  double q() const { return p_ / (p_ - 1.0); }

  /// The dual norm kind: dual(L1)=Linf, dual(L2)=L2, dual(Linf)=L1, dual(Lp)=Lq.
  NormKind dual() const;

  const char* name() const;

 private:
  NormKind(Tag tag, double p) : tag_(tag), p_(p) {}
  Tag tag_;
  double p_;
};

/// Perturbation budget: the set {delta : ||delta|| <= radius}.
struct NormBall {
  NormKind norm;
  double radius;  // epsilon >= 0

  NormBall(NormKind n, double eps) : norm(n), radius(eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw InvalidInputError("NormBall radius must be a finite nonnegative real");
    }
  }
};

/// An element of the subdifferential of the dual norm at w:
/// v satisfies v'w = ||w||_* and ||v|| <= 1 in the primal norm.
struct DualDirection {
  Vector v;
  bool tie_broken = false;
};

/// ||x|| for the given kind. Throws InvalidInputError on non-finite input.
double norm_value(const Vector& x, NormKind norm);

/// ||x||_* = sup { x'u : ||u|| <= 1 }.
double dual_norm_value(const Vector& x, NormKind norm);

/// Maximizer of w'v over the primal unit ball. Requires w != 0.
DualDirection dual_subgradient(const Vector& w, NormKind norm);

/// epsilon * v / ||v|| in the ball's primal norm; output norm is exactly epsilon.
Vector scale_to_budget(const DualDirection& dir, const NormBall& ball);

}  // namespace robustml
