// Copyright 2026 The pbscale Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pbscale/predictor/dataset.hpp"
#include "pbscale/predictor/tree.hpp"

namespace pbscale::predictor {

struct ForestParams {
  int n_trees = 50;
  int max_depth = 10;
  int min_samples_leaf = 2;
  bool sqrt_features = true;  // try round(sqrt(d)) features per split
  bool bootstrap = true;
};

/// Majority vote over CART trees. Ties predict 0 (violation).
class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, std::vector<ServiceId> services);

  int predict(std::span<const double> x) const;
  int predict(std::span<const int> replicas, std::span<const double> workloads) const;
  /// Number of trees voting 1.
  int votes(std::span<const double> x) const;

  std::size_t size() const noexcept { return trees_.size(); }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const std::vector<ServiceId>& services() const noexcept { return services_; }
  bool empty() const noexcept { return trees_.empty(); }

  nlohmann::json to_json() const;
  static RandomForest from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
  std::vector<ServiceId> services_;
};

TrainingMatrix to_matrix(const Dataset& data);

/// Every tree gets its own stream derived from `seed`; the result does not
/// depend on anything else.
RandomForest train_forest(const Dataset& data, const ForestParams& params, std::uint64_t seed);

struct Evaluation {
  int tp = 0;  // class 1 predicted 1
  int fp = 0;
  int tn = 0;
  int fn = 0;
  double precision() const;
  double recall() const;
  double accuracy() const;
};

Evaluation evaluate(const RandomForest& model, const Dataset& data);
Evaluation evaluate(const DecisionTree& tree, const Dataset& data);

void save_model(std::ostream& out, const RandomForest& model);
RandomForest load_model(std::istream& in);
void save_model(const std::string& path, const RandomForest& model);
RandomForest load_model(const std::string& path);

}  // namespace pbscale::predictor
