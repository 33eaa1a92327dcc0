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
#include <random>
#include <span>
#include <vector>

#include "json.hpp"

namespace pbscale::predictor {

struct TreeParams {
  int max_depth = 10;
  int min_samples_leaf = 2;
  int max_features = 0;  // features tried per split; 0 means all
};

/// Binary CART classifier over dense double features, Gini impurity.
/// A sample goes left when x[feature] <= threshold.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
    double p1 = 0.0;  // fraction of class 1 among training samples
    int samples = 0;
  };

  DecisionTree() = default;
  DecisionTree(std::vector<Node> nodes, std::size_t n_features);

  int predict(std::span<const double> x) const;
  double probability(std::span<const double> x) const;

  std::size_t n_features() const noexcept { return n_features_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int depth() const;
  bool degenerate() const noexcept { return nodes_.size() <= 1; }

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  const Node& leaf_for(std::span<const double> x) const;

  std::vector<Node> nodes_;
  std::size_t n_features_ = 0;
};

/// Row-major feature matrix with one 0/1 label per row.
struct TrainingMatrix {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

/// Grows a tree on rows[indices] (repeats allowed). `rng` drives feature
/// subsampling only.
DecisionTree train_tree(const TrainingMatrix& data, std::span<const std::size_t> indices,
                        const TreeParams& params, std::mt19937_64& rng);

/// Convenience overload over every row.
DecisionTree train_tree(const TrainingMatrix& data, const TreeParams& params,
                        std::uint64_t seed = 0);

}  // namespace pbscale::predictor
