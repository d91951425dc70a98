#include <doctest.h>

#include <random>

#include "robustml/norms.hpp"

namespace rml = robustml;
using rml::Vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

Vector random_nonzero(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = g(rng);
  } while (v.norm() < 1e-8);
  return v;
}

}  // namespace

TEST_SUITE("norms") {

TEST_CASE("norm values on hand-checked vectors") {
  CHECK(rml::norm_value(vec2(3, 4), rml::NormKind::l2()) == doctest::Approx(5.0));
  CHECK(rml::norm_value(vec2(3, -4), rml::NormKind::l1()) == doctest::Approx(7.0));
  CHECK(rml::norm_value(vec2(3, -4), rml::NormKind::linf()) == doctest::Approx(4.0));
  CHECK(rml::norm_value(Vector::Zero(3), rml::NormKind::l2()) == 0.0);
}

TEST_CASE("non-finite input rejected") {
  Vector v = vec2(1.0, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(rml::norm_value(v, rml::NormKind::l2()), rml::InvalidInputError);
  Vector n = vec2(std::nan(""), 0.0);
  CHECK_THROWS_AS(rml::norm_value(n, rml::NormKind::l1()), rml::InvalidInputError);
}

TEST_CASE("dual norm values") {
  CHECK(rml::dual_norm_value(vec2(3, 4), rml::NormKind::l2()) == doctest::Approx(5.0));
  // dual of Linf is L1
  CHECK(rml::dual_norm_value(vec2(3, -4), rml::NormKind::linf()) == doctest::Approx(7.0));
  CHECK(rml::dual_norm_value(Vector::Zero(4), rml::NormKind::l1()) == 0.0);
}

TEST_CASE("dual norm kind mapping") {
  CHECK(rml::NormKind::l1().dual().tag() == rml::NormKind::Tag::Linf);
  CHECK(rml::NormKind::l2().dual().tag() == rml::NormKind::Tag::L2);
  CHECK(rml::NormKind::linf().dual().tag() == rml::NormKind::Tag::L1);
  CHECK(rml::NormKind::lp(3.0).dual().p() == doctest::Approx(1.5));
}

TEST_CASE("lp requires finite p > 1") {
  CHECK_THROWS_AS(rml::NormKind::lp(1.0), rml::InvalidInputError);
  CHECK_THROWS_AS(rml::NormKind::lp(0.5), rml::InvalidInputError);
}

TEST_CASE("dual subgradient closed forms") {
  auto d2 = rml::dual_subgradient(vec2(3, 4), rml::NormKind::l2());
  CHECK(d2.v[0] == doctest::Approx(0.6));
  CHECK(d2.v[1] == doctest::Approx(0.8));

  auto dinf = rml::dual_subgradient(vec3(1, -2, 0), rml::NormKind::linf());
  CHECK(dinf.v[0] == 1.0);
  CHECK(dinf.v[1] == -1.0);
  CHECK(dinf.v[2] == 0.0);

  auto d1 = rml::dual_subgradient(vec2(1, -2), rml::NormKind::l1());
  CHECK(d1.v[0] == 0.0);
  CHECK(d1.v[1] == -1.0);
}

TEST_CASE("l1-ball ties resolve to the lowest index") {
  auto d = rml::dual_subgradient(vec2(2, -2), rml::NormKind::l1());
  CHECK(d.v[0] == 1.0);
  CHECK(d.v[1] == 0.0);
  CHECK(d.tie_broken);
}

TEST_CASE("zero vector is a degenerate direction") {
  CHECK_THROWS_AS(rml::dual_subgradient(Vector::Zero(2), rml::NormKind::l2()),
                  rml::DegenerateDirectionError);
}

TEST_CASE("scale_to_budget") {
  rml::DualDirection d{vec2(0.6, 0.8), false};
  Vector s = rml::scale_to_budget(d, rml::NormBall(rml::NormKind::l2(), 0.5));
  CHECK(s[0] == doctest::Approx(0.3));
  CHECK(s[1] == doctest::Approx(0.4));

  rml::DualDirection corner{vec2(1, -1), false};
  Vector c = rml::scale_to_budget(corner, rml::NormBall(rml::NormKind::linf(), 2.0));
  CHECK(c[0] == doctest::Approx(2.0));
  CHECK(c[1] == doctest::Approx(-2.0));

  Vector z = rml::scale_to_budget(corner, rml::NormBall(rml::NormKind::linf(), 0.0));
  CHECK(z.norm() == 0.0);
}

TEST_CASE("subgradient identities on random inputs") {
  std::mt19937_64 rng(12345);
  std::vector<rml::NormKind> kinds = {rml::NormKind::l1(), rml::NormKind::l2(),
                                      rml::NormKind::linf(), rml::NormKind::lp(3.0),
                                      rml::NormKind::lp(1.5)};
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + static_cast<int>(rng() % 8);
    Vector w = random_nonzero(d, rng);
    for (const auto& kind : kinds) {
      auto dir = rml::dual_subgradient(w, kind);
      double dv = rml::dual_norm_value(w, kind);
      CHECK(dir.v.dot(w) == doctest::Approx(dv).epsilon(1e-9));
      CHECK(rml::norm_value(dir.v, kind) <= 1.0 + 1e-12);

      double eps = 0.25 + 2.0 * (static_cast<double>(rng() % 1000) / 1000.0);
      Vector delta = rml::scale_to_budget(dir, rml::NormBall(kind, eps));
      CHECK(rml::norm_value(delta, kind) == doctest::Approx(eps).epsilon(1e-10));
      CHECK(w.dot(delta) == doctest::Approx(eps * dv).epsilon(1e-9));
    }
  }
}

TEST_CASE("no sampled ball point beats the analytic linear maximum") {
  std::mt19937_64 rng(777);
  std::normal_distribution<double> g;
  std::vector<rml::NormKind> kinds = {rml::NormKind::l1(), rml::NormKind::l2(),
                                      rml::NormKind::linf()};
  for (const auto& kind : kinds) {
    Vector w = random_nonzero(5, rng);
    double eps = 0.7;
    rml::NormBall ball(kind, eps);
    double best = eps * rml::dual_norm_value(w, kind);
    for (int i = 0; i < 10000; ++i) {
      Vector p(5);
      for (int k = 0; k < 5; ++k) p[k] = g(rng);
      double n = rml::norm_value(p, kind);
      if (n == 0.0) continue;
      p *= eps / n;
      CHECK(w.dot(p) <= best + 1e-9);
    }
  }
}

}  // TEST_SUITE
