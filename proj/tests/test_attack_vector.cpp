#include <doctest.h>

#include <random>

#include "robustml/attack_vector.hpp"

namespace rml = robustml;
using rml::Vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("attack_vector") {

TEST_CASE("squared loss attack follows the residual sign") {
  rml::LinearModel m{vec2(3, 4)};
  rml::LabeledSample s{vec2(1, 0), 2.0};
  auto r = rml::attack_squared(s, m, rml::NormBall(rml::NormKind::l2(), 0.5));
  CHECK(r.delta[0] == doctest::Approx(0.3));
  CHECK(r.delta[1] == doctest::Approx(0.4));
  CHECK(r.objective == doctest::Approx(12.25));
}

TEST_CASE("squared loss attack on the linf ball hits a corner") {
  rml::LinearModel m{vec2(1, -2)};
  rml::LabeledSample s{vec2(0, 0), -1.0};
  auto r = rml::attack_squared(s, m, rml::NormBall(rml::NormKind::linf(), 1.0));
  CHECK(r.delta[0] == doctest::Approx(1.0));
  CHECK(r.delta[1] == doctest::Approx(-1.0));
  CHECK(r.objective == doctest::Approx(16.0));
}

TEST_CASE("zero budget returns the clean loss") {
  rml::LinearModel m{vec2(3, 4)};
  rml::LabeledSample s{vec2(1, 0), 2.0};
  auto r = rml::attack_squared(s, m, rml::NormBall(rml::NormKind::l2(), 0.0));
  CHECK(r.delta.norm() == 0.0);
  CHECK(r.objective == doctest::Approx(rml::squared_loss(m, s.x, s.y)));
}

TEST_CASE("logistic attack pushes against the label") {
  rml::LinearModel m{vec2(0, 5)};
  rml::LabeledSample s{vec2(1, 1), 1.0};
  auto r = rml::attack_logistic(s, m, rml::NormBall(rml::NormKind::l2(), 1.0));
  CHECK(r.delta[0] == doctest::Approx(0.0));
  CHECK(r.delta[1] == doctest::Approx(-1.0));
  CHECK(r.objective == doctest::Approx(std::log(2.0)));

  rml::LabeledSample flipped{vec2(1, 1), -1.0};
  auto rf = rml::attack_logistic(flipped, m, rml::NormBall(rml::NormKind::l2(), 1.0));
  CHECK(rf.delta[1] == doctest::Approx(1.0));
}

TEST_CASE("hinge attack reports margin activity") {
  rml::LinearModel m{vec2(0, 5)};
  rml::LabeledSample s{vec2(1, 1), 1.0};
  auto r = rml::attack_hinge(s, m, rml::NormBall(rml::NormKind::l2(), 0.5));
  CHECK(r.delta[1] == doctest::Approx(-0.5));
  CHECK_FALSE(r.active);
  CHECK(r.objective == doctest::Approx(0.0));

  rml::LinearModel m2{vec2(1, 0)};
  rml::LabeledSample s2{vec2(1, 0), 1.0};
  auto r2 = rml::attack_hinge(s2, m2, rml::NormBall(rml::NormKind::l2(), 0.5));
  CHECK(r2.delta[0] == doctest::Approx(-0.5));
  CHECK(r2.active);
  CHECK(r2.objective == doctest::Approx(0.5));
}

TEST_CASE("classification attacks require plus-minus-one labels") {
  rml::LinearModel m{vec2(1, 0)};
  rml::LabeledSample bad{vec2(1, 0), 0.5};
  rml::NormBall ball(rml::NormKind::l2(), 1.0);
  CHECK_THROWS_AS(rml::attack_logistic(bad, m, ball), rml::InvalidInputError);
  CHECK_THROWS_AS(rml::attack_hinge(bad, m, ball), rml::InvalidInputError);
}

TEST_CASE("zero weights yield a flagged zero perturbation") {
  rml::LinearModel m{Vector::Zero(2)};
  rml::LabeledSample s{vec2(1, 2), 1.0};
  for (auto* attack : {&rml::attack_squared, &rml::attack_logistic, &rml::attack_hinge}) {
    auto r = (*attack)(s, m, rml::NormBall(rml::NormKind::l2(), 1.0));
    CHECK(r.delta.norm() == 0.0);
    CHECK(r.degenerate);
  }
}

TEST_CASE("logistic and hinge attacks share the same direction") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    int d = 2 + static_cast<int>(rng() % 5);
    Vector w(d), x(d);
    for (int i = 0; i < d; ++i) {
      w[i] = g(rng);
      x[i] = g(rng);
    }
    if (w.norm() < 1e-8) continue;
    double y = (rng() % 2) ? 1.0 : -1.0;
    rml::LinearModel m{w};
    rml::LabeledSample s{x, y};
    rml::NormBall ball(rml::NormKind::l2(), 0.7);
    auto rl = rml::attack_logistic(s, m, ball);
    auto rh = rml::attack_hinge(s, m, ball);
    CHECK((rl.delta - rh.delta).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("budget saturates whenever the loss is monotone in the attack direction") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::vector<rml::NormKind> kinds = {rml::NormKind::l1(), rml::NormKind::l2(),
                                      rml::NormKind::linf()};
  for (int t = 0; t < 60; ++t) {
    int d = 2 + static_cast<int>(rng() % 4);
    Vector w(d), x(d);
    for (int i = 0; i < d; ++i) {
      w[i] = g(rng);
      x[i] = g(rng);
    }
    if (w.norm() < 1e-8) continue;
    rml::LinearModel m{w};
    const auto& kind = kinds[t % kinds.size()];
    rml::NormBall ball(kind, 0.4);
    rml::LabeledSample cls{x, 1.0};
    auto rl = rml::attack_logistic(cls, m, ball);
    CHECK(rml::norm_value(rl.delta, kind) == doctest::Approx(0.4).epsilon(1e-10));
    rml::LabeledSample reg{x, w.dot(x) + 0.5};  // nonzero residual
    auto rs = rml::attack_squared(reg, m, ball);
    CHECK(rml::norm_value(rs.delta, kind) == doctest::Approx(0.4).epsilon(1e-10));
  }
}

TEST_CASE("random feasible points never beat the analytic attack") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int t = 0; t < 30; ++t) {
    int d = 3;
    Vector w(d), x(d);
    for (int i = 0; i < d; ++i) {
      w[i] = g(rng);
      x[i] = g(rng);
    }
    if (w.norm() < 1e-8) continue;
    double eps = 0.6;
    rml::NormBall ball(rml::NormKind::l2(), eps);
    rml::LinearModel m{w};
    double y = (t % 2) ? 1.0 : -1.0;
    rml::LabeledSample s{x, y};
    auto rs = rml::attack_squared({x, 0.3}, m, ball);
    auto rl = rml::attack_logistic(s, m, ball);
    auto rh = rml::attack_hinge(s, m, ball);
    for (int i = 0; i < 2000; ++i) {
      Vector p(d);
      for (int k = 0; k < d; ++k) p[k] = g(rng);
      if (p.norm() == 0.0) continue;
      p *= eps / p.norm();
      CHECK(rml::squared_loss(m, x + p, 0.3) <= rs.objective + 1e-8);
      CHECK(rml::logistic_loss(m, x + p, y) <= rl.objective + 1e-8);
      CHECK(rml::hinge_loss(m, x + p, y) <= rh.objective + 1e-8);
    }
  }
}

}  // TEST_SUITE
