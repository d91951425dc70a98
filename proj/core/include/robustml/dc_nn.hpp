#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "robustml/attack_vector.hpp"
#include "robustml/norms.hpp"

namespace robustml {

using Matrix = Eigen::MatrixXd;

/// First-layer activation of the two-layer network.
struct ActivationKind {
  enum class Tag {
    Linear,
    Softplus,
    ReLU,          // sigma(z) = max(slope_neg * z, z - shift)
    BentIdentity,
    ISRLU,         // a > 0
    Tanh,
    Arctan,
    Sigmoid,
    Erf,
    GELU,
    ISRU,          // a > 0
    SiLU,
    ELU,           // alpha > 0
    ClippedReLU,   // a > 0
  };

  Tag tag = Tag::ReLU;
  double slope_neg = 0.0;  // ReLU family
  double shift = 0.0;      // ReLU family
  double a = 1.0;          // ISRLU / ISRU / ClippedReLU
  double alpha = 1.0;      // ELU

  static ActivationKind linear() { return {Tag::Linear}; }
  static ActivationKind softplus() { return {Tag::Softplus}; }
  static ActivationKind relu(double slope_neg = 0.0, double shift = 0.0) {
    ActivationKind k{Tag::ReLU};
    if (slope_neg < 0.0) throw InvalidInputError("relu slope_neg must be >= 0");
    k.slope_neg = slope_neg;
    k.shift = shift;
    return k;
  }
  static ActivationKind bent_identity() { return {Tag::BentIdentity}; }
  static ActivationKind isrlu(double a) { return param(Tag::ISRLU, a); }
  static ActivationKind tanh() { return {Tag::Tanh}; }
  static ActivationKind arctan() { return {Tag::Arctan}; }
  static ActivationKind sigmoid() { return {Tag::Sigmoid}; }
  static ActivationKind erf() { return {Tag::Erf}; }
  static ActivationKind gelu() { return {Tag::GELU}; }
  static ActivationKind isru(double a) { return param(Tag::ISRU, a); }
  static ActivationKind silu() { return {Tag::SiLU}; }
  static ActivationKind elu(double alpha) {
    if (!(alpha > 0.0)) throw InvalidInputError("elu alpha must be > 0");
    ActivationKind k{Tag::ELU};
    k.alpha = alpha;
    return k;
  }
  static ActivationKind clipped_relu(double a) { return param(Tag::ClippedReLU, a); }

  const char* name() const;

 private:
  static ActivationKind param(Tag t, double a) {
    if (!(a > 0.0)) throw InvalidInputError("activation parameter must be > 0");
    ActivationKind k{t};
    k.a = a;
    return k;
  }
};

/// Scalar function with one chosen subgradient per point.
struct ScalarFn {
  std::function<double(double)> value;
  std::function<double(double)> subgrad;
};

/// Split sigma = sigma1 - sigma2 with sigma1, sigma2 convex.
struct DcPair {
  ScalarFn sigma;    // the activation itself (value + derivative/subgradient)
  ScalarFn sigma1;
  ScalarFn sigma2;
  std::vector<double> breakpoints;
};

struct TwoLayerNet {
  Matrix W;             // h x d
  Vector v;             // h
  ActivationKind activation;
};

struct DcaTrace {
  std::vector<std::pair<Vector, double>> iterates;  // (delta_k, f(delta_k))
  bool converged = false;
  int iterations = 0;
};

struct NnObjective {
  double f;  // g - h = y * v' sigma(W'(x+delta))
  double g;
  double h;
};

/// Exact Table-row decomposition for the activation kind.
DcPair dc_decompose(const ActivationKind& kind);

/// Network output split into its convex/concave parts at x + delta.
NnObjective nn_attack_objective(const Vector& delta, const TwoLayerNet& net,
                                const LabeledSample& s);

/// Gradients (one chosen subgradient) of the convex parts at x + delta.
Vector nn_grad_g(const Vector& delta, const TwoLayerNet& net, const LabeledSample& s);
Vector nn_grad_h(const Vector& delta, const TwoLayerNet& net, const LabeledSample& s);

/// Log-loss of the network at x + delta (the quantity the attack maximizes).
double nn_log_loss(const TwoLayerNet& net, const Vector& x, double y);

/// Projection onto the epsilon-ball (L1 / L2 / Linf).
Vector project_to_ball(const Vector& z, const NormBall& ball);

/// DCA on f = g - h over the ball; monotone in f by construction.
std::pair<AttackResult, DcaTrace> dca_attack(const TwoLayerNet& net, const LabeledSample& s,
                                             const NormBall& ball, double tol, int max_iter);

}  // namespace robustml
