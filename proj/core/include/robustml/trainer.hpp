#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "robustml/attack_vector.hpp"
#include "robustml/dc_nn.hpp"
#include "robustml/ggm_attack.hpp"
#include "robustml/mc_attack.hpp"
#include "robustml/norms.hpp"

namespace robustml {

enum class Family {
  SquaredRegression,
  Logistic,
  Hinge,
  TwoLayerNN,
  GGM,
  MatrixCompletion,
  MaxMarginMC,
};

enum class TrainMode { NoError, Random, Proposed };

const char* family_name(Family f);
const char* mode_name(TrainMode m);
Family family_from_string(const std::string& s);
TrainMode mode_from_string(const std::string& s);

struct TrainConfig {
  int iterations;           // T >= 1
  double eta;               // step size > 0
  NormBall ball{NormKind::l2(), 0.0};  // attack budget
  TrainMode mode = TrainMode::Proposed;
  std::uint64_t seed = 0;
  double reg_c = 0.0;       // trace-norm weight (MC) / l1 weight (GGM)
  double dca_tol = 1e-6;    // two-layer NN attack
  int dca_max_iter = 20;

  void validate() const;
};

struct ProblemSpec {
  Family family = Family::SquaredRegression;
  ActivationKind activation = ActivationKind::relu();  // TwoLayerNN only
  int hidden = 2;                                      // TwoLayerNN only

  /// Rejects family/norm pairs the theory does not cover (config error,
  /// raised at construction time, never mid-training).
  void validate_ball(const NormBall& ball) const;
};

struct Dataset {
  std::vector<LabeledSample> samples;
};

/// Model parameters; the active alternative is determined by the family.
using Params = std::variant<LinearModel, TwoLayerNet, Eigen::MatrixXd>;

struct TrainData {
  Dataset dataset;      // vector families + GGM (labels ignored for GGM)
  PartialMatrix matrix; // matrix-completion families
};

struct TrainResult {
  Params params;
  std::vector<double> loss_history;  // robust (attacked) loss per iteration
};

struct Gradient {
  Vector w;            // linear families
  Matrix W;            // NN first layer
  Vector v;            // NN output layer
  Matrix m;            // GGM / MC
};

struct MetricRecord {
  std::string name;    // mse | accuracy | loglik
  double value = 0.0;
  bool higher_is_better = false;
};

/// Worst-case / random / zero perturbation of one vector sample.
Vector perturb(const ProblemSpec& spec, const Params& params, const LabeledSample& sample,
               const TrainConfig& config, std::mt19937_64& rng);

/// Same for the observed entries of a matrix-completion instance.
SparsePerturbation perturb_matrix(const ProblemSpec& spec, const Params& params,
                                  const PartialMatrix& X, const TrainConfig& config,
                                  std::mt19937_64& rng);

/// Family loss and parameter gradient at a (perturbed) vector sample.
double loss_and_grad(const ProblemSpec& spec, const Params& params,
                     const LabeledSample& perturbed, double reg_c, Gradient& grad);

/// Same for matrix families (perturbed observed values passed in X).
double loss_and_grad_matrix(const ProblemSpec& spec, const Params& params,
                            const PartialMatrix& X_perturbed, double reg_c, Gradient& grad);

/// Full-batch attack-then-step training loop.
TrainResult train(const ProblemSpec& spec, const TrainData& data, const TrainConfig& config);

/// MSE / accuracy / Gaussian log-likelihood on held-out data.
MetricRecord evaluate(const ProblemSpec& spec, const Params& params, const TrainData& testset);

/// Singular-value soft-thresholding (prox of tau * trace norm).
Matrix svt_prox(const Matrix& Y, double tau);

}  // namespace robustml
