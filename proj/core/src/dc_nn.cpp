#include "robustml/dc_nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace robustml {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }
double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double gelu_value(double z) { return z * norm_cdf(z); }
double gelu_deriv(double z) { return norm_cdf(z) + z * norm_pdf(z); }

double silu_value(double z) { return z * sigmoid(z); }
double silu_deriv(double z) {
  double s = sigmoid(z);
  return s + z * s * (1.0 - s);
}

// positive root of (z * sigmoid(z))'' = 0, the curvature-change abscissa
double silu_inflection() {
  static const double root = [] {
    auto curv = [](double z) {
      double s = sigmoid(z);
      double sp = s * (1.0 - s);
      double spp = sp * (1.0 - 2.0 * s);
      return 2.0 * sp + z * spp;
    };
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      (curv(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return root;
}

ScalarFn make_fn(std::function<double(double)> v, std::function<double(double)> g) {
  return ScalarFn{std::move(v), std::move(g)};
}

ScalarFn zero_fn() {
  return make_fn([](double) { return 0.0; }, [](double) { return 0.0; });
}

// sigma convex on its own: sigma1 = sigma, sigma2 = 0
DcPair convex_pair(ScalarFn sigma, std::vector<double> bps) {
  DcPair p;
  p.sigma = sigma;
  p.sigma1 = sigma;
  p.sigma2 = zero_fn();
  p.breakpoints = std::move(bps);
  return p;
}

// single breakpoint at 0; sigma convex for z < 0 and concave for z >= 0:
//   z < 0 : sigma1 = sigma - z, sigma2 = -z
//   z >= 0: sigma1 = z,         sigma2 = z - sigma
DcPair sshape_pair(const ScalarFn& sigma) {
  DcPair p;
  p.sigma = sigma;
  p.sigma1 = make_fn(
      [sigma](double z) { return z < 0.0 ? sigma.value(z) - z : z; },
      [sigma](double z) { return z < 0.0 ? sigma.subgrad(z) - 1.0 : 1.0; });
  p.sigma2 = make_fn(
      [sigma](double z) { return z < 0.0 ? -z : z - sigma.value(z); },
      [sigma](double z) { return z < 0.0 ? -1.0 : 1.0 - sigma.subgrad(z); });
  p.breakpoints = {0.0};
  return p;
}

// like sshape_pair but valid when sigma(0) != 0 (the -z trick above needs
// sigma(0) = 0 for continuity): replace the concave half by its tangent at 0
//   z < 0 : sigma1 = sigma,                   sigma2 = 0
//   z >= 0: sigma1 = sigma(0) + sigma'(0) z,  sigma2 = sigma1 - sigma
DcPair tangent_sshape_pair(const ScalarFn& sigma) {
  double c0 = sigma.value(0.0);
  double s0 = sigma.subgrad(0.0);
  DcPair p;
  p.sigma = sigma;
  p.sigma1 = make_fn(
      [sigma, c0, s0](double z) { return z < 0.0 ? sigma.value(z) : c0 + s0 * z; },
      [sigma, s0](double z) { return z < 0.0 ? sigma.subgrad(z) : s0; });
  p.sigma2 = make_fn(
      [sigma, c0, s0](double z) { return z < 0.0 ? 0.0 : c0 + s0 * z - sigma.value(z); },
      [sigma, s0](double z) { return z < 0.0 ? 0.0 : s0 - sigma.subgrad(z); });
  p.breakpoints = {0.0};
  return p;
}

// convex in the middle, concave outside +-b; outer pieces replaced by tangent-like
// lines with the table's rounded slopes, anchored at the breakpoints for continuity
DcPair three_piece_pair(const ScalarFn& sigma, double b, double slope_l, double slope_r) {
  double cl = sigma.value(-b) + slope_l * b;   // line value matches sigma at -b
  double cr = sigma.value(b) - slope_r * b;    // and at +b
  DcPair p;
  p.sigma = sigma;
  p.sigma1 = make_fn(
      [sigma, b, slope_l, slope_r, cl, cr](double z) {
        if (z < -b) return slope_l * z + cl;
        if (z < b) return sigma.value(z);
        return slope_r * z + cr;
      },
      [sigma, b, slope_l, slope_r](double z) {
        if (z < -b) return slope_l;
        if (z < b) return sigma.subgrad(z);
        return slope_r;
      });
  p.sigma2 = make_fn(
      [sigma, b, slope_l, slope_r, cl, cr](double z) {
        if (z < -b) return slope_l * z + cl - sigma.value(z);
        if (z < b) return 0.0;
        return slope_r * z + cr - sigma.value(z);
      },
      [sigma, b, slope_l, slope_r](double z) {
        if (z < -b) return slope_l - sigma.subgrad(z);
        if (z < b) return 0.0;
        return slope_r - sigma.subgrad(z);
      });
  p.breakpoints = {-b, b};
  return p;
}

}  // namespace

const char* ActivationKind::name() const {
  switch (tag) {
    case Tag::Linear: return "linear";
    case Tag::Softplus: return "softplus";
    case Tag::ReLU: return "relu";
    case Tag::BentIdentity: return "bent_identity";
    case Tag::ISRLU: return "isrlu";
    case Tag::Tanh: return "tanh";
    case Tag::Arctan: return "arctan";
    case Tag::Sigmoid: return "sigmoid";
    case Tag::Erf: return "erf";
    case Tag::GELU: return "gelu";
    case Tag::ISRU: return "isru";
    case Tag::SiLU: return "silu";
    case Tag::ELU: return "elu";
    case Tag::ClippedReLU: return "clipped_relu";
  }
  return "?";
}

DcPair dc_decompose(const ActivationKind& kind) {
  using Tag = ActivationKind::Tag;
  switch (kind.tag) {
    case Tag::Linear:
      return convex_pair(make_fn([](double z) { return z; }, [](double) { return 1.0; }), {});
    case Tag::Softplus:
      return convex_pair(make_fn(
          [](double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); },
          [](double z) { return sigmoid(z); }), {});
    case Tag::ReLU: {
      double sn = kind.slope_neg, sh = kind.shift;
      auto fn = make_fn(
          [sn, sh](double z) { return std::max(sn * z, z - sh); },
          [sn, sh](double z) { return z - sh >= sn * z ? 1.0 : sn; });
      std::vector<double> bps;
      if (sn != 1.0) bps.push_back(sh / (1.0 - sn));
      return convex_pair(fn, bps);
    }
    case Tag::BentIdentity:
      return convex_pair(make_fn(
          [](double z) { return 0.5 * (std::sqrt(z * z + 1.0) - 1.0) + z; },
          [](double z) { return 0.5 * z / std::sqrt(z * z + 1.0) + 1.0; }), {});
    case Tag::ISRLU: {
      double a = kind.a;
      return convex_pair(make_fn(
          [a](double z) { return z < 0.0 ? z / std::sqrt(1.0 + a * z * z) : z; },
          [a](double z) { return z < 0.0 ? std::pow(1.0 + a * z * z, -1.5) : 1.0; }),
          {0.0});
    }
    case Tag::Tanh:
      return sshape_pair(make_fn(
          [](double z) { return std::tanh(z); },
          [](double z) { double t = std::tanh(z); return 1.0 - t * t; }));
    case Tag::Arctan:
      return sshape_pair(make_fn(
          [](double z) { return std::atan(z); },
          [](double z) { return 1.0 / (1.0 + z * z); }));
    case Tag::Sigmoid:
      // sigmoid(0) = 1/2, so the generic s-shape split is discontinuous there
      return tangent_sshape_pair(make_fn(
          [](double z) { return sigmoid(z); },
          [](double z) { double s = sigmoid(z); return s * (1.0 - s); }));
    case Tag::Erf: {
      double c = 2.0 / std::sqrt(kPi);
      return sshape_pair(make_fn(
          [](double z) { return std::erf(z); },
          [c](double z) { return c * std::exp(-z * z); }));
    }
    case Tag::GELU:
      // curvature changes exactly at +-sqrt(2); rounded tangent slopes from the
      // linearization at those points
      return three_piece_pair(make_fn(gelu_value, gelu_deriv), std::sqrt(2.0), -0.13, 1.13);
    case Tag::ISRU: {
      double a = kind.a;
      return sshape_pair(make_fn(
          [a](double z) { return z / std::sqrt(1.0 + a * z * z); },
          [a](double z) { return std::pow(1.0 + a * z * z, -1.5); }));
    }
    case Tag::SiLU:
      return three_piece_pair(make_fn(silu_value, silu_deriv), silu_inflection(), -0.10, 1.10);
    case Tag::ELU: {
      double al = kind.alpha;
      auto sig = make_fn(
          [al](double z) { return z < 0.0 ? al * std::expm1(z) : z; },
          [al](double z) { return z < 0.0 ? al * std::exp(z) : 1.0; });
      if (al <= 1.0) return convex_pair(sig, {0.0});
      DcPair p;
      p.sigma = sig;
      p.sigma1 = make_fn(
          [al](double z) { return z < 0.0 ? al * std::expm1(z) : al * z; },
          [al](double z) { return z < 0.0 ? al * std::exp(z) : al; });
      p.sigma2 = make_fn(
          [al](double z) { return z < 0.0 ? 0.0 : (al - 1.0) * z; },
          [al](double z) { return z < 0.0 ? 0.0 : al - 1.0; });
      p.breakpoints = {0.0};
      return p;
    }
    case Tag::ClippedReLU: {
      double a = kind.a;
      DcPair p;
      p.sigma = make_fn(
          [a](double z) { return std::clamp(z, 0.0, a); },
          [a](double z) { return z >= 0.0 && z < a ? 1.0 : 0.0; });
      p.sigma1 = make_fn(
          [](double z) { return std::max(z, 0.0); },
          [](double z) { return z >= 0.0 ? 1.0 : 0.0; });
      p.sigma2 = make_fn(
          [a](double z) { return std::max(z - a, 0.0); },
          [a](double z) { return z >= a ? 1.0 : 0.0; });
      p.breakpoints = {0.0, a};
      return p;
    }
  }
  throw InvalidInputError("unknown activation kind");
}

namespace {

void check_net(const TwoLayerNet& net, const LabeledSample& s) {
  if (net.W.rows() != net.v.size() || net.W.cols() != s.x.size()) {
    throw InvalidInputError("network/sample shape mismatch");
  }
  if (s.y != 1.0 && s.y != -1.0) {
    throw InvalidInputError("classification label must be exactly +1 or -1");
  }
}

}  // namespace

NnObjective nn_attack_objective(const Vector& delta, const TwoLayerNet& net,
                                const LabeledSample& s) {
  check_net(net, s);
  DcPair dc = dc_decompose(net.activation);
  Vector z = net.W * (s.x + delta);
  NnObjective out{0.0, 0.0, 0.0};
  for (Eigen::Index i = 0; i < net.v.size(); ++i) {
    double c = s.y * net.v[i];
    if (c > 0.0) {
      out.g += c * dc.sigma1.value(z[i]);
      out.h += c * dc.sigma2.value(z[i]);
    } else if (c < 0.0) {
      out.g += -c * dc.sigma2.value(z[i]);
      out.h += -c * dc.sigma1.value(z[i]);
    }
  }
  out.f = out.g - out.h;
  return out;
}

namespace {

Vector nn_grad(const Vector& delta, const TwoLayerNet& net, const LabeledSample& s,
               bool of_g) {
  DcPair dc = dc_decompose(net.activation);
  Vector z = net.W * (s.x + delta);
  Vector grad = Vector::Zero(s.x.size());
  for (Eigen::Index i = 0; i < net.v.size(); ++i) {
    double c = s.y * net.v[i];
    if (c == 0.0) continue;
    const ScalarFn& part = (c > 0.0) == of_g ? dc.sigma1 : dc.sigma2;
    grad += std::abs(c) * part.subgrad(z[i]) * net.W.row(i).transpose();
  }
  return grad;
}

}  // namespace

Vector nn_grad_g(const Vector& delta, const TwoLayerNet& net, const LabeledSample& s) {
  return nn_grad(delta, net, s, true);
}

Vector nn_grad_h(const Vector& delta, const TwoLayerNet& net, const LabeledSample& s) {
  return nn_grad(delta, net, s, false);
}

double nn_log_loss(const TwoLayerNet& net, const Vector& x, double y) {
  DcPair dc = dc_decompose(net.activation);
  Vector z = net.W * x;
  double out = 0.0;
  for (Eigen::Index i = 0; i < net.v.size(); ++i) out += net.v[i] * dc.sigma.value(z[i]);
  double t = -y * out;
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

Vector project_to_ball(const Vector& z, const NormBall& ball) {
  double eps = ball.radius;
  if (eps == 0.0) return Vector::Zero(z.size());
  switch (ball.norm.tag()) {
    case NormKind::Tag::L2: {
      double n = z.norm();
      return n <= eps ? z : Vector((eps / n) * z);
    }
    case NormKind::Tag::Linf:
      return z.cwiseMax(-eps).cwiseMin(eps);
    case NormKind::Tag::L1: {
      if (z.lpNorm<1>() <= eps) return z;
      // sort-based projection onto the l1 ball (soft threshold at theta)
      std::vector<double> u(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i) u[i] = std::abs(z[i]);
      std::sort(u.begin(), u.end(), std::greater<>());
      double cum = 0.0, theta = 0.0;
      for (size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        double t = (cum - eps) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
        else break;
      }
      return z.unaryExpr([theta](double t) {
        double m = std::abs(t) - theta;
        return m > 0.0 ? (t > 0.0 ? m : -m) : 0.0;
      });
    }
    case NormKind::Tag::Lp:
      throw InvalidInputError("ball projection supports l1/l2/linf only");
  }
  throw InvalidInputError("unknown norm tag");
}

namespace {

// min over the ball of g(delta) - u'delta by projected subgradient, warm started
// at `start`; never returns a point worse than `start` for this objective
Vector solve_convex_subproblem(const TwoLayerNet& net, const LabeledSample& s,
                               const NormBall& ball, const Vector& u, const Vector& start,
                               int steps) {
  auto G = [&](const Vector& d) { return nn_attack_objective(d, net, s).g - u.dot(d); };
  Vector best = start;
  double best_val = G(start);
  Vector cur = start;
  double c = std::max(ball.radius, 1e-6);
  for (int t = 1; t <= steps; ++t) {
    Vector grad = nn_grad_g(cur, net, s) - u;
    double gn = grad.norm();
    if (gn == 0.0) break;
    cur = project_to_ball(cur - (c / (gn * std::sqrt(double(t)))) * grad, ball);
    double val = G(cur);
    if (val < best_val) {
      best_val = val;
      best = cur;
    }
  }
  return best;
}

// one DCA run from a given start; appends iterates to the trace
Vector dca_run(const TwoLayerNet& net, const LabeledSample& s, const NormBall& ball,
               double tol, int max_iter, const Vector& start, DcaTrace& trace) {
  Vector delta = project_to_ball(start, ball);
  double f = nn_attack_objective(delta, net, s).f;
  trace.iterates.emplace_back(delta, f);
  for (int k = 0; k < max_iter; ++k) {
    Vector u = nn_grad_h(delta, net, s);
    Vector next = solve_convex_subproblem(net, s, ball, u, delta, 500);
    double f_next = nn_attack_objective(next, net, s).f;
    ++trace.iterations;
    if (f_next > f) {  // inexact subproblem: keep the current iterate
      next = delta;
      f_next = f;
    }
    trace.iterates.emplace_back(next, f_next);
    bool done = std::abs(f_next - f) < tol;
    delta = next;
    f = f_next;
    if (done) {
      trace.converged = true;
      break;
    }
  }
  return delta;
}

}  // namespace

std::pair<AttackResult, DcaTrace> dca_attack(const TwoLayerNet& net, const LabeledSample& s,
                                             const NormBall& ball, double tol, int max_iter) {
  check_net(net, s);
  if (!(tol > 0.0) || max_iter < 1) {
    throw InvalidInputError("dca_attack requires tol > 0 and max_iter >= 1");
  }
  AttackResult result;
  DcaTrace trace;
  if (ball.radius == 0.0) {
    result.delta = Vector::Zero(s.x.size());
    result.objective = nn_log_loss(net, s.x, s.y);
    trace.converged = true;
    trace.iterations = 1;
    trace.iterates.emplace_back(result.delta, nn_attack_objective(result.delta, net, s).f);
    return {result, trace};
  }

  Vector zero = Vector::Zero(s.x.size());
  Vector best = dca_run(net, s, ball, tol, max_iter, zero, trace);
  double best_f = nn_attack_objective(best, net, s).f;

  // the objective is piecewise smooth in the hidden-unit sign pattern, so a
  // single descent run can stall in the wrong orthant; restart from the
  // linearization minimizer, from extreme points aligned with each hidden
  // unit's weight row (flipping that unit's activation region), and from a few
  // fixed-seed random surface points
  std::vector<Vector> starts;
  Vector lin = nn_grad_g(zero, net, s) - nn_grad_h(zero, net, s);
  if (lin.cwiseAbs().maxCoeff() > 0.0) {
    starts.push_back(-scale_to_budget(dual_subgradient(lin, ball.norm), ball));
  }
  const Eigen::Index rows_used = std::min<Eigen::Index>(net.W.rows(), 3);
  for (Eigen::Index j = 0; j < rows_used; ++j) {
    Vector w = net.W.row(j).transpose();
    if (w.cwiseAbs().maxCoeff() == 0.0) continue;
    Vector dir = scale_to_budget(dual_subgradient(w, ball.norm), ball);
    starts.push_back(dir);
    starts.push_back(-dir);
  }
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < 4; ++r) {
    Vector v(s.x.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    if (v.cwiseAbs().maxCoeff() == 0.0) continue;
    starts.push_back(scale_to_budget(dual_subgradient(v, ball.norm), ball));
  }
  for (const Vector& init : starts) {
    DcaTrace trace2;
    Vector cand = dca_run(net, s, ball, tol, max_iter, init, trace2);
    double cand_f = nn_attack_objective(cand, net, s).f;
    if (cand_f < best_f) {
      best = cand;
      best_f = cand_f;
      trace = std::move(trace2);
    }
  }

  result.delta = best;
  result.objective = nn_log_loss(net, s.x + best, s.y);
  return {result, trace};
}

}  // namespace robustml
