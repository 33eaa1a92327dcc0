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

#include "pbscale/predictor/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pbscale/error.hpp"

namespace pbscale::predictor {

DecisionTree::DecisionTree(std::vector<Node> nodes, std::size_t n_features)
    : nodes_(std::move(nodes)), n_features_(n_features) {
  if (nodes_.empty()) throw Error("tree has no nodes");
  const int n = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.feature < 0) continue;
    if (static_cast<std::size_t>(node.feature) >= n_features_ || node.left <= 0 ||
        node.right <= 0 || node.left >= n || node.right >= n) {
      throw Error("malformed tree node");
    }
  }
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
  if (nodes_.empty()) throw Error("tree is not trained");
  if (x.size() != n_features_) throw Error("feature vector has the wrong length");
  const Node* node = &nodes_[0];
  while (node->feature >= 0) {
    node = &nodes_[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

int DecisionTree::predict(std::span<const double> x) const { return leaf_for(x).label; }

double DecisionTree::probability(std::span<const double> x) const { return leaf_for(x).p1; }

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  // children always have larger indices than their parent
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                     {"right", n.right}, {"label", n.label}, {"p1", n.p1},
                     {"samples", n.samples}});
  }
  return {{"n_features", n_features_}, {"nodes", std::move(nodes)}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  std::vector<Node> nodes;
  for (const auto& n : j.at("nodes")) {
    Node node;
    node.feature = n.at("feature").get<int>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<int>();
    node.right = n.at("right").get<int>();
    node.label = n.at("label").get<int>();
    node.p1 = n.at("p1").get<double>();
    node.samples = n.at("samples").get<int>();
    nodes.push_back(node);
  }
  return DecisionTree(std::move(nodes), j.at("n_features").get<std::size_t>());
}

namespace {

double gini(double ones, double total) {
  if (total <= 0.0) return 0.0;
  const double p = ones / total;
  return 2.0 * p * (1.0 - p);
}

struct Builder {
  const TrainingMatrix& data;
  const TreeParams& params;
  std::mt19937_64& rng;
  std::size_t n_features;
  std::vector<DecisionTree::Node> nodes;

  int make_leaf(std::span<const std::size_t> idx) {
    DecisionTree::Node leaf;
    int ones = 0;
    for (auto i : idx) ones += data.y[i];
    leaf.samples = static_cast<int>(idx.size());
    leaf.p1 = idx.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(idx.size());
    leaf.label = 2 * ones > static_cast<int>(idx.size()) ? 1 : 0;
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size() - 1);
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> f(n_features);
    std::iota(f.begin(), f.end(), std::size_t{0});
    const auto k = static_cast<std::size_t>(params.max_features);
    if (k == 0 || k >= n_features) return f;
    // partial Fisher-Yates, then restore index order so ties break the same way
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n_features - 1);
      std::swap(f[i], f[pick(rng)]);
    }
    f.resize(k);
    std::sort(f.begin(), f.end());
    return f;
  }

  int grow(std::vector<std::size_t> idx, int depth) {
    int ones = 0;
    for (auto i : idx) ones += data.y[i];
    const auto n = idx.size();
    const auto min_leaf = static_cast<std::size_t>(std::max(1, params.min_samples_leaf));
    if (depth >= params.max_depth || ones == 0 || ones == static_cast<int>(n) ||
        n < 2 * min_leaf) {
      return make_leaf(idx);
    }

    double best_impurity = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    for (auto f : candidate_features()) {
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return data.x[a][f] < data.x[b][f];
      });
      double left_ones = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_ones += data.y[idx[k]];
        const double v = data.x[idx[k]][f];
        if (!(v < data.x[idx[k + 1]][f])) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double impurity =
            (static_cast<double>(nl) * gini(left_ones, static_cast<double>(nl)) +
             static_cast<double>(nr) * gini(ones - left_ones, static_cast<double>(nr))) /
            static_cast<double>(n);
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = v;
        }
      }
    }
    if (best_feature < 0) return make_leaf(idx);

    std::vector<std::size_t> left, right;
    const auto bf = static_cast<std::size_t>(best_feature);
    for (auto i : idx) (data.x[i][bf] <= best_threshold ? left : right).push_back(i);

    const int self = make_leaf(idx);  // keeps label/p1 for inspection
    nodes[static_cast<std::size_t>(self)].feature = best_feature;
    nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    nodes[static_cast<std::size_t>(self)].left = l;
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }
};

}  // namespace

DecisionTree train_tree(const TrainingMatrix& data, std::span<const std::size_t> indices,
                        const TreeParams& params, std::mt19937_64& rng) {
  if (data.x.empty() || data.x.size() != data.y.size()) {
    throw Error("training matrix is empty or ragged");
  }
  if (indices.empty()) throw Error("no training rows selected");
  if (params.max_depth < 0 || params.min_samples_leaf < 1 || params.max_features < 0) {
    throw Error("invalid tree parameters");
  }
  const std::size_t d = data.x.front().size();
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    if (data.x[i].size() != d) throw Error("training matrix is ragged");
    if (data.y[i] != 0 && data.y[i] != 1) throw Error("labels must be 0 or 1");
  }
  for (auto i : indices) {
    if (i >= data.x.size()) throw Error("training row index out of range");
  }
  Builder b{data, params, rng, d, {}};
  b.grow(std::vector<std::size_t>(indices.begin(), indices.end()), 0);
  return DecisionTree(std::move(b.nodes), d);
}

DecisionTree train_tree(const TrainingMatrix& data, const TreeParams& params,
                        std::uint64_t seed) {
  std::vector<std::size_t> idx(data.x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  return train_tree(data, idx, params, rng);
}

}  // namespace pbscale::predictor
