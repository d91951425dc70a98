#pragma once

#include <map>
#include <string>

#include "robustml/trainer.hpp"

namespace robustml {

/// CSV dataset: last column is the label, remaining columns are features.
Dataset load_dense(const std::string& path, bool has_header = false);
void save_dense(const std::string& path, const Dataset& data);

/// Triplet format: one "row col value" per line, 0-based indices.
PartialMatrix load_sparse(const std::string& path);
void save_sparse(const std::string& path, const PartialMatrix& m);

/// Flat key=value config; '#' starts a comment. Unknown keys are rejected.
struct RunConfig {
  ProblemSpec spec;
  TrainConfig train;
  // generator knobs (experiment subcommand)
  int n_train = 80;
  int n_test = 200;
  int dim = 10;
  int mc_rows = 20;
  int mc_cols = 15;
  int mc_rank = 2;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace robustml
