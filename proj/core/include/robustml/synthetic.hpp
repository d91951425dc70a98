#pragma once

#include <cstdint>

#include "robustml/io.hpp"

namespace robustml {

/// Train split plus a distribution-shifted test split.
struct SyntheticSplit {
  TrainData train;
  TrainData test;
};

/// Linear regression: fixed ground-truth weights, train x ~ N(0, I),
/// test x ~ N(0.5*1, I), label noise sigma = 0.1.
SyntheticSplit make_regression(int dim, int n_train, int n_test, std::uint64_t seed);

/// Binary classification from two Gaussians at +-mu; at test time both class
/// means move 0.5 toward the decision boundary. hinge_labels leaves y in
/// {-1,+1} either way; the flag only tags intent for callers.
SyntheticSplit make_classification(int dim, int n_train, int n_test, std::uint64_t seed);

/// Zero-mean Gaussians: train drawn under precision Omega_A, test under
/// Omega_B which differs from Omega_A in 10% of its edges.
SyntheticSplit make_ggm(int dim, int n_train, int n_test, std::uint64_t seed);

/// Low-rank ground truth; train observes a random entry subset, test re-observes
/// the same entries with additive N(0, 0.25) noise. signs=true emits the
/// element signs instead (for max-margin sign recovery).
SyntheticSplit make_matrix(int rows, int cols, int rank, bool signs, std::uint64_t seed);

/// Dispatch on the problem family using the generator knobs in cfg.
SyntheticSplit make_synthetic(const RunConfig& cfg);

}  // namespace robustml
