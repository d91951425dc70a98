#include <doctest.h>

#include <random>

#include "robustml/dc_nn.hpp"

namespace rml = robustml;
using rml::Matrix;
using rml::Vector;

namespace {

std::vector<rml::ActivationKind> all_kinds() {
  return {
      rml::ActivationKind::linear(),
      rml::ActivationKind::softplus(),
      rml::ActivationKind::relu(),
      rml::ActivationKind::relu(0.1, 0.0),   // leaky
      rml::ActivationKind::relu(0.0, 0.5),   // shifted
      rml::ActivationKind::bent_identity(),
      rml::ActivationKind::isrlu(1.0),
      rml::ActivationKind::tanh(),
      rml::ActivationKind::arctan(),
      rml::ActivationKind::sigmoid(),
      rml::ActivationKind::erf(),
      rml::ActivationKind::gelu(),
      rml::ActivationKind::isru(1.0),
      rml::ActivationKind::silu(),
      rml::ActivationKind::elu(0.8),
      rml::ActivationKind::elu(1.0),
      rml::ActivationKind::elu(1.7),
      rml::ActivationKind::clipped_relu(2.0),
  };
}

bool loose_row(const rml::ActivationKind& k) {
  return k.tag == rml::ActivationKind::Tag::GELU || k.tag == rml::ActivationKind::Tag::SiLU;
}

}  // namespace

TEST_SUITE("dc_nn") {

TEST_CASE("decomposition identity sigma1 - sigma2 = sigma on a dense grid") {
  for (const auto& kind : all_kinds()) {
    rml::DcPair pair = rml::dc_decompose(kind);
    double tol = loose_row(kind) ? 1e-2 : 1e-7;
    for (int i = 0; i < 1000; ++i) {
      double z = -10.0 + 20.0 * i / 999.0;
      double diff = pair.sigma1.value(z) - pair.sigma2.value(z) - pair.sigma.value(z);
      INFO(kind.name(), " at z=", z);
      CHECK(std::abs(diff) < tol);
    }
  }
}

TEST_CASE("both split parts are midpoint convex") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (const auto& kind : all_kinds()) {
    rml::DcPair pair = rml::dc_decompose(kind);
    for (int t = 0; t < 500; ++t) {
      double a = u(rng), b = u(rng);
      double mid = 0.5 * (a + b);
      for (const auto* fn : {&pair.sigma1, &pair.sigma2}) {
        double lhs = fn->value(mid);
        double rhs = 0.5 * (fn->value(a) + fn->value(b));
        INFO(kind.name());
        CHECK(lhs <= rhs + 1e-9);
      }
    }
  }
}

TEST_CASE("relu splits as (max(0,z), 0)") {
  auto pair = rml::dc_decompose(rml::ActivationKind::relu());
  CHECK(pair.sigma1.value(2.0) == 2.0);
  CHECK(pair.sigma1.value(-3.0) == 0.0);
  CHECK(pair.sigma2.value(5.0) == 0.0);
  CHECK(pair.sigma2.value(-5.0) == 0.0);
}

TEST_CASE("tanh split at z = -1") {
  auto pair = rml::dc_decompose(rml::ActivationKind::tanh());
  CHECK(pair.sigma1.value(-1.0) == doctest::Approx(std::tanh(-1.0) + 1.0).epsilon(1e-10));
  CHECK(pair.sigma2.value(-1.0) == doctest::Approx(1.0));
  CHECK(pair.sigma1.value(-1.0) - pair.sigma2.value(-1.0) ==
        doctest::Approx(std::tanh(-1.0)).epsilon(1e-12));
}

TEST_CASE("clipped relu uses the two-hinge split") {
  auto pair = rml::dc_decompose(rml::ActivationKind::clipped_relu(2.0));
  CHECK(pair.sigma1.value(3.0) == 3.0);
  CHECK(pair.sigma2.value(3.0) == 1.0);
  CHECK(pair.sigma.value(3.0) == 2.0);
  CHECK(pair.sigma.value(-1.0) == 0.0);
}

TEST_CASE("invalid activation parameters are rejected") {
  CHECK_THROWS_AS(rml::ActivationKind::elu(0.0), rml::InvalidInputError);
  CHECK_THROWS_AS(rml::ActivationKind::isru(-1.0), rml::InvalidInputError);
  CHECK_THROWS_AS(rml::ActivationKind::relu(-0.5), rml::InvalidInputError);
}

TEST_CASE("network objective splits by the sign of y*v") {
  rml::TwoLayerNet net;
  net.activation = rml::ActivationKind::relu();
  net.W = Matrix(2, 2);
  net.W << 1, 0, 0, 1;
  net.v = Vector(2);
  net.v << 1, -1;
  Vector x(2);
  x << 0.5, -0.3;
  rml::LabeledSample s{x, 1.0};
  Vector delta = Vector::Zero(2);
  auto obj = rml::nn_attack_objective(delta, net, s);
  CHECK(obj.g == doctest::Approx(std::max(0.0, 0.5)));
  CHECK(obj.h == doctest::Approx(std::max(0.0, -0.3)));
  CHECK(obj.f == doctest::Approx(obj.g - obj.h));

  rml::LabeledSample neg{x, -1.0};
  auto obj_neg = rml::nn_attack_objective(delta, net, neg);
  CHECK(obj_neg.f == doctest::Approx(-obj.f));
}

TEST_CASE("split objective equals the direct forward pass") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    int h = 1 + static_cast<int>(rng() % 4), d = 1 + static_cast<int>(rng() % 4);
    rml::TwoLayerNet net;
    net.activation = all_kinds()[t % all_kinds().size()];
    net.W = Matrix::NullaryExpr(h, d, [&](Eigen::Index, Eigen::Index) { return g(rng); });
    net.v = Vector::NullaryExpr(h, [&](Eigen::Index) { return g(rng); });
    Vector x = Vector::NullaryExpr(d, [&](Eigen::Index) { return g(rng); });
    Vector delta = Vector::NullaryExpr(d, [&](Eigen::Index) { return 0.1 * g(rng); });
    double y = (t % 2) ? 1.0 : -1.0;
    auto obj = rml::nn_attack_objective(delta, net, {x, y});
    rml::DcPair pair = rml::dc_decompose(net.activation);
    Vector z = net.W * (x + delta);
    double direct = 0.0;
    for (int i = 0; i < h; ++i) direct += y * net.v[i] * pair.sigma.value(z[i]);
    double tol = loose_row(net.activation) ? 1e-2 : 1e-10;
    CHECK(obj.f == doctest::Approx(direct).epsilon(tol));
  }
}

TEST_CASE("ball projections") {
  Vector z(3);
  z << 3, -4, 0;
  Vector p2 = rml::project_to_ball(z, rml::NormBall(rml::NormKind::l2(), 1.0));
  CHECK(p2.norm() == doctest::Approx(1.0));
  Vector pinf = rml::project_to_ball(z, rml::NormBall(rml::NormKind::linf(), 2.0));
  CHECK(pinf[0] == 2.0);
  CHECK(pinf[1] == -2.0);
  Vector p1 = rml::project_to_ball(z, rml::NormBall(rml::NormKind::l1(), 1.0));
  CHECK(rml::norm_value(p1, rml::NormKind::l1()) == doctest::Approx(1.0));
  // interior points are untouched
  Vector inside(3);
  inside << 0.1, 0.1, 0.0;
  Vector same = rml::project_to_ball(inside, rml::NormBall(rml::NormKind::l1(), 1.0));
  CHECK((same - inside).norm() == doctest::Approx(0.0));
}

TEST_CASE("single relu unit attack reaches the closed-form minimum") {
  rml::TwoLayerNet net;
  net.activation = rml::ActivationKind::relu();
  net.W = Matrix(1, 2);
  net.W << 1, 0;
  net.v = Vector(1);
  net.v << 1;
  Vector x(2);
  x << 2, 0;
  rml::LabeledSample s{x, -1.0};
  auto [result, trace] =
      rml::dca_attack(net, s, rml::NormBall(rml::NormKind::l2(), 1.0), 1e-8, 30);
  // f(delta) = -max(0, 2 + delta_1) is minimized at delta = (1, 0), f = -3
  CHECK(result.delta[0] == doctest::Approx(1.0).epsilon(1e-4));
  auto obj = rml::nn_attack_objective(result.delta, net, s);
  CHECK(obj.f == doctest::Approx(-3.0).epsilon(1e-6));
}

TEST_CASE("zero budget attack stops immediately") {
  rml::TwoLayerNet net;
  net.activation = rml::ActivationKind::sigmoid();
  net.W = Matrix(2, 2);
  net.W << 1, 2, -1, 0.5;
  net.v = Vector(2);
  net.v << 1, 1;
  Vector x(2);
  x << 0.3, -0.2;
  auto [result, trace] =
      rml::dca_attack(net, {x, 1.0}, rml::NormBall(rml::NormKind::l2(), 0.0), 1e-8, 30);
  CHECK(result.delta.norm() == 0.0);
  CHECK(trace.converged);
}

TEST_CASE("descent trace is monotone on random instances") {
  std::mt19937_64 rng(555);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    int h = 1 + static_cast<int>(rng() % 3), d = 1 + static_cast<int>(rng() % 3);
    rml::TwoLayerNet net;
    net.activation =
        (t % 3 == 0) ? rml::ActivationKind::relu()
                     : (t % 3 == 1 ? rml::ActivationKind::sigmoid() : rml::ActivationKind::tanh());
    net.W = Matrix::NullaryExpr(h, d, [&](Eigen::Index, Eigen::Index) { return g(rng); });
    net.v = Vector::NullaryExpr(h, [&](Eigen::Index) { return g(rng); });
    Vector x = Vector::NullaryExpr(d, [&](Eigen::Index) { return g(rng); });
    double y = (t % 2) ? 1.0 : -1.0;
    auto [result, trace] =
        rml::dca_attack(net, {x, y}, rml::NormBall(rml::NormKind::l2(), 0.5), 1e-7, 15);
    for (size_t k = 1; k < trace.iterates.size(); ++k) {
      CHECK(trace.iterates[k].second <= trace.iterates[k - 1].second + 1e-9);
    }
  }
}

TEST_CASE("convex instances converge within two outer iterations") {
  // all y*v_i > 0 and sigma2 = 0 makes h identically zero
  std::mt19937_64 rng(808);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    rml::TwoLayerNet net;
    net.activation = rml::ActivationKind::relu();
    net.W = Matrix::NullaryExpr(2, 2, [&](Eigen::Index, Eigen::Index) { return g(rng); });
    net.v = Vector(2);
    net.v << std::abs(g(rng)) + 0.1, std::abs(g(rng)) + 0.1;
    Vector x(2);
    x << g(rng), g(rng);
    auto [result, trace] =
        rml::dca_attack(net, {x, 1.0}, rml::NormBall(rml::NormKind::l2(), 0.3), 1e-7, 15);
    CHECK(trace.converged);
    CHECK(trace.iterations <= 2);
  }
}

}  // TEST_SUITE
