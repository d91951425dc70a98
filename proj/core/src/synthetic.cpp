#include "robustml/synthetic.hpp"

#include <Eigen/Cholesky>
#include <random>

namespace robustml {

namespace {

Vector gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  return v;
}

// Deterministic ground-truth weights: alternating-sign harmonic profile.
Vector true_weights(int dim) {
  Vector w(dim);
  for (int i = 0; i < dim; ++i) w[i] = (i % 2 == 0 ? 1.0 : -1.0) / (1.0 + 0.5 * i);
  return w;
}

// Path-graph precision matrix made PD by diagonal dominance. flip_edges
// flips the sign of the coupling on the first k edges.
Matrix path_precision(int dim, int flip_edges) {
  Matrix omega = Matrix::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    double w = (i < flip_edges) ? 0.3 : -0.3;
    omega(i, i + 1) = w;
    omega(i + 1, i) = w;
  }
  for (int i = 0; i < dim; ++i) {
    double offsum = omega.row(i).cwiseAbs().sum();
    omega(i, i) = 1.0 + offsum;
  }
  return omega;
}

Dataset sample_ggm(const Matrix& omega, int n, std::mt19937_64& rng) {
  // x = U^{-1} z with Omega = U^T U gives cov(x) = Omega^{-1}
  Eigen::LLT<Matrix> llt(omega);
  Dataset data;
  data.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector z = gaussian_vector(static_cast<int>(omega.rows()), rng);
    LabeledSample s;
    s.x = llt.matrixU().solve(z);
    s.y = 0.0;
    data.samples.push_back(std::move(s));
  }
  return data;
}

}  // namespace

SyntheticSplit make_regression(int dim, int n_train, int n_test, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  Vector w = true_weights(dim);
  SyntheticSplit out;
  for (int i = 0; i < n_train; ++i) {
    LabeledSample s;
    s.x = gaussian_vector(dim, rng);
    s.y = w.dot(s.x) + noise(rng);
    out.train.dataset.samples.push_back(std::move(s));
  }
  Vector shift = Vector::Constant(dim, 0.5);
  for (int i = 0; i < n_test; ++i) {
    LabeledSample s;
    s.x = gaussian_vector(dim, rng) + shift;
    s.y = w.dot(s.x) + noise(rng);
    out.test.dataset.samples.push_back(std::move(s));
  }
  return out;
}

SyntheticSplit make_classification(int dim, int n_train, int n_test, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  Vector mu = Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  SyntheticSplit out;
  auto draw = [&](double mean_scale) {
    LabeledSample s;
    s.y = coin(rng) ? 1.0 : -1.0;
    s.x = gaussian_vector(dim, rng) + (s.y * mean_scale) * mu;
    return s;
  };
  for (int i = 0; i < n_train; ++i) out.train.dataset.samples.push_back(draw(1.5));
  // test means move 0.5 toward the boundary
  for (int i = 0; i < n_test; ++i) out.test.dataset.samples.push_back(draw(1.0));
  return out;
}

SyntheticSplit make_ggm(int dim, int n_train, int n_test, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int n_edges = dim - 1;
  int flips = std::max(1, static_cast<int>(std::lround(0.1 * n_edges)));
  Matrix omega_a = path_precision(dim, 0);
  Matrix omega_b = path_precision(dim, flips);
  SyntheticSplit out;
  out.train.dataset = sample_ggm(omega_a, n_train, rng);
  out.test.dataset = sample_ggm(omega_b, n_test, rng);
  return out;
}

SyntheticSplit make_matrix(int rows, int cols, int rank, bool signs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::normal_distribution<double> test_noise(0.0, 0.5);  // variance 0.25
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix u(rows, rank), v(cols, rank);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < rank; ++k) u(i, k) = gauss(rng);
  for (int j = 0; j < cols; ++j)
    for (int k = 0; k < rank; ++k) v(j, k) = gauss(rng);
  Matrix m = u * v.transpose() / std::sqrt(static_cast<double>(rank));

  SyntheticSplit out;
  out.train.matrix.rows = out.test.matrix.rows = rows;
  out.train.matrix.cols = out.test.matrix.cols = cols;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (unif(rng) > 0.6) continue;  // observe ~60% of entries
      double truth = m(i, j);
      double noisy = truth + test_noise(rng);
      if (signs) {
        truth = truth >= 0.0 ? 1.0 : -1.0;
        noisy = noisy >= 0.0 ? 1.0 : -1.0;
      }
      out.train.matrix.observed.push_back({i, j, truth});
      out.test.matrix.observed.push_back({i, j, noisy});
    }
  }
  return out;
}

SyntheticSplit make_synthetic(const RunConfig& cfg) {
  std::uint64_t seed = cfg.train.seed;
  switch (cfg.spec.family) {
    case Family::SquaredRegression:
    case Family::TwoLayerNN:
      return make_regression(cfg.dim, cfg.n_train, cfg.n_test, seed);
    case Family::Logistic:
    case Family::Hinge:
      return make_classification(cfg.dim, cfg.n_train, cfg.n_test, seed);
    case Family::GGM:
      return make_ggm(cfg.dim, cfg.n_train, cfg.n_test, seed);
    case Family::MatrixCompletion:
      return make_matrix(cfg.mc_rows, cfg.mc_cols, cfg.mc_rank, false, seed);
    case Family::MaxMarginMC:
      return make_matrix(cfg.mc_rows, cfg.mc_cols, cfg.mc_rank, true, seed);
  }
  throw InvalidInputError("unknown family");
}

}  // namespace robustml
