#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "robustml/ggm_attack.hpp"

namespace rml = robustml;
using Eigen::MatrixXd;
using rml::Vector;

namespace {

MatrixXd random_pd(int p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = g(rng);
  return a * a.transpose() + 0.3 * MatrixXd::Identity(p, p);
}

}  // namespace

TEST_SUITE("ggm_attack") {

TEST_CASE("precision matrix validates symmetry and definiteness") {
  MatrixXd bad(2, 2);
  bad << 1, 0.5, -0.5, 1;
  CHECK_THROWS_AS(rml::PrecisionMatrix{bad}, rml::InvalidInputError);
  MatrixXd indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(rml::PrecisionMatrix{indef}, rml::InvalidInputError);
  MatrixXd ok = MatrixXd::Identity(3, 3);
  rml::PrecisionMatrix pm(ok);
  CHECK(pm.lambda_min() == doctest::Approx(1.0));
  CHECK(pm.lambda_max() == doctest::Approx(1.0));
}

TEST_CASE("identity precision, hand-solved dual") {
  rml::PrecisionMatrix omega(MatrixXd::Identity(2, 2));
  Vector x(2);
  x << 3, 4;
  auto [result, dual] = rml::ggm_attack_l2(x, omega, 1.0);
  CHECK(dual.mu == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(result.delta[0] == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(result.delta[1] == doctest::Approx(0.8).epsilon(1e-8));
  CHECK(result.objective == doctest::Approx(36.0).epsilon(1e-8));
}

TEST_CASE("zero budget leaves the sample untouched") {
  rml::PrecisionMatrix omega(MatrixXd::Identity(2, 2));
  Vector x(2);
  x << 1, 2;
  auto [result, dual] = rml::ggm_attack_l2(x, omega, 0.0);
  CHECK(result.delta.norm() == 0.0);
  CHECK(result.objective == doctest::Approx(5.0));
}

TEST_CASE("x = 0 triggers the top-eigenvector hard case") {
  MatrixXd d(2, 2);
  d << 2, 0, 0, 1;
  rml::PrecisionMatrix omega(d);
  auto [result, dual] = rml::ggm_attack_l2(Vector::Zero(2), omega, 1.0);
  CHECK(dual.hard_case);
  CHECK(std::abs(result.delta[0]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(result.delta[1]) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(result.objective == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("l2 attack: strong duality, saturation, dominance on random instances") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    int p = 2 + static_cast<int>(rng() % 5);
    rml::PrecisionMatrix omega(random_pd(p, rng));
    Vector x(p);
    for (int i = 0; i < p; ++i) x[i] = g(rng);
    double eps = 0.3 + (t % 5) * 0.2;
    auto [result, dual] = rml::ggm_attack_l2(x, omega, eps);

    CHECK(dual.mu >= omega.lambda_max() - 1e-9);
    CHECK(result.delta.norm() == doctest::Approx(eps).epsilon(1e-6));
    // strong duality: half the quadratic gain equals -g(mu*)
    double fstar = 0.5 * (result.objective - x.dot(omega.matrix() * x));
    CHECK(fstar == doctest::Approx(-dual.dual_value).epsilon(1e-6));

    for (int i = 0; i < 3000; ++i) {
      Vector d(p);
      for (int k = 0; k < p; ++k) d[k] = g(rng);
      if (d.norm() == 0.0) continue;
      d *= eps / d.norm();
      Vector z = x + d;
      CHECK(z.dot(omega.matrix() * z) <=
            result.objective * (1.0 + 1e-6) + 1e-9);
    }
  }
}

TEST_CASE("scalar box attack") {
  MatrixXd o(1, 1);
  o << 2;
  rml::PrecisionMatrix omega(o);
  Vector x(1);
  x << 1;
  auto [result, sdp] = rml::ggm_attack_linf(x, omega, 0.5);
  CHECK(result.delta[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(result.objective == doctest::Approx(4.5).epsilon(1e-6));
}

TEST_CASE("identity precision box attack picks the sign corner") {
  rml::PrecisionMatrix omega(MatrixXd::Identity(2, 2));
  Vector x(2);
  x << 1, -2;
  auto [result, sdp] = rml::ggm_attack_linf(x, omega, 1.0);
  CHECK(result.delta[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.delta[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(result.objective == doctest::Approx(13.0).epsilon(1e-6));
}

TEST_CASE("box attack matches corner enumeration and keeps sdp iterate feasible") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    int p = 2 + static_cast<int>(rng() % 3);
    rml::PrecisionMatrix omega(random_pd(p, rng));
    Vector x(p);
    for (int i = 0; i < p; ++i) x[i] = g(rng);
    double eps = 0.4;
    auto [result, sdp] = rml::ggm_attack_linf(x, omega, eps);

    double best = -1e300;
    for (int mask = 0; mask < (1 << p); ++mask) {
      Vector d(p);
      for (int i = 0; i < p; ++i) d[i] = (mask >> i) & 1 ? eps : -eps;
      Vector z = x + d;
      best = std::max(best, z.dot(omega.matrix() * z));
    }
    CHECK(result.objective == doctest::Approx(best).epsilon(1e-5));

    // SDP iterate invariants: anchor, box, PSD
    int n = p + 1;
    CHECK(sdp.Y(n - 1, n - 1) == doctest::Approx(1.0).epsilon(1e-7));
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) CHECK(std::abs(sdp.Y(i, j)) <= eps * eps + 1e-7);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sdp.Y);
    CHECK(es.eigenvalues().minCoeff() >= -1e-7);
  }
}

TEST_CASE("psd projection") {
  MatrixXd d(2, 2);
  d << 2, 0, 0, -1;
  MatrixXd pd = rml::psd_project(d);
  CHECK(pd(0, 0) == doctest::Approx(2.0));
  CHECK(pd(1, 1) == doctest::Approx(0.0));

  MatrixXd s(2, 2);
  s << 0, 1, 1, 0;
  MatrixXd ps = rml::psd_project(s);
  CHECK(ps(0, 0) == doctest::Approx(0.5));
  CHECK(ps(0, 1) == doctest::Approx(0.5));
  CHECK(ps(1, 1) == doctest::Approx(0.5));

  MatrixXd already = MatrixXd::Identity(3, 3) * 2.0;
  CHECK((rml::psd_project(already) - already).norm() < 1e-10);
}

}  // TEST_SUITE
