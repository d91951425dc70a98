#include "robustml/attack_vector.hpp"

#include <cmath>

namespace robustml {

namespace {

void check_dims(const LabeledSample& s, const LinearModel& m) {
  if (s.x.size() != m.w.size()) {
    throw InvalidInputError("sample/model dimension mismatch");
  }
}

void check_label(double y) {
  if (y != 1.0 && y != -1.0) {
    throw InvalidInputError("classification label must be exactly +1 or -1");
  }
}

bool weights_zero(const LinearModel& m) {
  return m.w.size() == 0 || m.w.cwiseAbs().maxCoeff() == 0.0;
}

// -epsilon * y * v / ||v||, shared by the logistic and hinge attacks
AttackResult margin_attack(const LabeledSample& s, const LinearModel& m, const NormBall& ball) {
  AttackResult r;
  if (ball.radius == 0.0 || weights_zero(m)) {
    r.delta = Vector::Zero(s.x.size());
    r.degenerate = weights_zero(m);
    return r;
  }
  DualDirection v = dual_subgradient(m.w, ball.norm);
  r.delta = -s.y * scale_to_budget(v, ball);
  return r;
}

}  // namespace

double squared_loss(const LinearModel& m, const Vector& x, double y) {
  double r = m.w.dot(x) - y;
  return r * r;
}

double logistic_loss(const LinearModel& m, const Vector& x, double y) {
  double t = -y * m.w.dot(x);
  // log1p(exp(t)) without overflow
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double hinge_loss(const LinearModel& m, const Vector& x, double y) {
  return std::max(0.0, 1.0 - y * m.w.dot(x));
}

AttackResult attack_squared(const LabeledSample& s, const LinearModel& m, const NormBall& ball) {
  check_dims(s, m);
  AttackResult r;
  if (ball.radius == 0.0 || weights_zero(m)) {
    r.delta = Vector::Zero(s.x.size());
    r.degenerate = weights_zero(m);
  } else {
    double residual = m.w.dot(s.x) - s.y;
    DualDirection v = dual_subgradient(m.w, ball.norm);
    Vector step = scale_to_budget(v, ball);
    // zero residual: '+' branch by convention, both signs tie
    r.delta = residual < 0.0 ? Vector(-step) : step;
  }
  r.objective = squared_loss(m, s.x + r.delta, s.y);
  return r;
}

AttackResult attack_logistic(const LabeledSample& s, const LinearModel& m, const NormBall& ball) {
  check_dims(s, m);
  check_label(s.y);
  AttackResult r = margin_attack(s, m, ball);
  r.objective = logistic_loss(m, s.x + r.delta, s.y);
  return r;
}

AttackResult attack_hinge(const LabeledSample& s, const LinearModel& m, const NormBall& ball) {
  check_dims(s, m);
  check_label(s.y);
  AttackResult r = margin_attack(s, m, ball);
  r.objective = hinge_loss(m, s.x + r.delta, s.y);
  if (ball.radius > 0.0 && !r.degenerate) {
    DualDirection v = dual_subgradient(m.w, ball.norm);
    r.active = s.y * m.w.dot(s.x) - ball.radius * m.w.dot(v.v) < 1.0;
  } else {
    r.active = hinge_loss(m, s.x, s.y) > 0.0;
  }
  return r;
}

}  // namespace robustml
