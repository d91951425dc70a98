#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "robustml/norms.hpp"

namespace robustml {

struct OracleReport {
  Vector best_delta;
  double best_value = 0.0;
  long samples_used = 0;
  double analytic_value = 0.0;
  double gap = 0.0;  // analytic - best; >= -tol on a passing run
};

/// Uniform point on the surface of the ball (norm-appropriate sampling).
Vector sample_ball_surface(int dim, const NormBall& ball, std::mt19937_64& rng);

/// Best objective value found over surface samples, extreme points and a local
/// coordinate refinement. A falsifier, not a prover.
OracleReport brute_force_ball_max(const std::function<double(const Vector&)>& objective,
                                  int dim, const NormBall& ball, long n_samples,
                                  int refine_steps, std::uint64_t seed,
                                  double analytic_value = 0.0);

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  int skipped = 0;  // coordinates excluded (kink detected)
};

/// Central-difference check of an analytic gradient at a point.
FiniteDiffReport finite_diff_check(const std::function<double(const Vector&)>& fn,
                                   const std::function<Vector(const Vector&)>& grad,
                                   const Vector& point, double h);

}  // namespace robustml
