#include <benchmark/benchmark.h>

#include <random>

#include "robustml/dc_nn.hpp"
#include "robustml/ggm_attack.hpp"
#include "robustml/mc_attack.hpp"

namespace rml = robustml;

namespace {

rml::Vector random_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  rml::Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = g(rng);
  return v;
}

void bench_attack_logistic(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  rml::LinearModel m{random_vector(d, rng)};
  rml::LabeledSample s{random_vector(d, rng), 1.0};
  rml::NormBall ball(rml::NormKind::l2(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rml::attack_logistic(s, m, ball));
  }
}
BENCHMARK(bench_attack_logistic)->Arg(16)->Arg(256)->Arg(4096);

void bench_ggm_l2(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  std::mt19937_64 rng(11);
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = random_vector(1, rng)[0];
  Eigen::MatrixXd omega_m = a * a.transpose() + 0.5 * p * Eigen::MatrixXd::Identity(p, p);
  rml::PrecisionMatrix omega(omega_m);
  rml::Vector x = random_vector(p, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rml::ggm_attack_l2(x, omega, 0.5));
  }
}
BENCHMARK(bench_ggm_l2)->Arg(8)->Arg(32)->Arg(128);

void bench_dca_relu(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  rml::TwoLayerNet net;
  net.activation = rml::ActivationKind::relu();
  net.W = Eigen::MatrixXd::NullaryExpr(4, d, [&](Eigen::Index, Eigen::Index) {
    std::normal_distribution<double> g;
    return g(rng);
  });
  net.v = random_vector(4, rng);
  rml::LabeledSample s{random_vector(d, rng), 1.0};
  rml::NormBall ball(rml::NormKind::l2(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rml::dca_attack(net, s, ball, 1e-6, 10));
  }
}
BENCHMARK(bench_dca_relu)->Arg(8)->Arg(32);

void bench_mc_fro(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  rml::PartialMatrix X;
  X.rows = X.cols = n;
  Eigen::MatrixXd Y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Y(i, j) = g(rng);
      if ((i + j) % 2 == 0) X.observed.push_back({i, j, g(rng)});
    }
  for (auto _ : state) {
    benchmark::DoNotOptimize(rml::mc_attack_fro(X, Y, 0.5));
  }
}
BENCHMARK(bench_mc_fro)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
