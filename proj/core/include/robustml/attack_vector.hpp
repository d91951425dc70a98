#pragma once

#include "robustml/norms.hpp"

namespace robustml {

/// Feature vector with a real label (exactly +-1 for classification losses).
struct LabeledSample {
  Vector x;
  double y;
};

struct LinearModel {
  Vector w;
};

struct AttackResult {
  Vector delta;
  double objective = 0.0;
  /// hinge only: whether the perturbed sample carries positive loss
  bool active = false;
  /// set when w = 0 made the loss constant in delta (delta = 0 returned)
  bool degenerate = false;
};

double squared_loss(const LinearModel& m, const Vector& x, double y);
double logistic_loss(const LinearModel& m, const Vector& x, double y);
double hinge_loss(const LinearModel& m, const Vector& x, double y);

/// Worst-case perturbation of the squared loss over the ball.
AttackResult attack_squared(const LabeledSample& s, const LinearModel& m, const NormBall& ball);

/// Worst-case perturbation of the logistic loss over the ball.
AttackResult attack_logistic(const LabeledSample& s, const LinearModel& m, const NormBall& ball);

/// Worst-case perturbation of the hinge loss over the ball.
AttackResult attack_hinge(const LabeledSample& s, const LinearModel& m, const NormBall& ball);

}  // namespace robustml
