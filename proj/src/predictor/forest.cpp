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

#include "pbscale/predictor/forest.hpp"

#include <cmath>
#include <fstream>

#include "pbscale/error.hpp"
#include "pbscale/random.hpp"

namespace pbscale::predictor {

RandomForest::RandomForest(std::vector<DecisionTree> trees, std::vector<ServiceId> services)
    : trees_(std::move(trees)), services_(std::move(services)) {
  for (const auto& t : trees_) {
    if (t.n_features() != 2 * services_.size()) {
      throw Error("tree feature count does not match the service list");
    }
  }
}

int RandomForest::votes(std::span<const double> x) const {
  if (trees_.empty()) throw Error("model has no trees");
  int ones = 0;
  for (const auto& t : trees_) ones += t.predict(x);
  return ones;
}

int RandomForest::predict(std::span<const double> x) const {
  return 2 * votes(x) > static_cast<int>(trees_.size()) ? 1 : 0;
}

int RandomForest::predict(std::span<const int> replicas, std::span<const double> workloads) const {
  if (replicas.size() != services_.size() || workloads.size() != services_.size()) {
    throw Error("replica/workload vectors do not match the model's services");
  }
  const auto x = features(replicas, workloads);
  return predict(x);
}

nlohmann::json RandomForest::to_json() const {
  nlohmann::json j;
  j["format"] = "pbscale-forest";
  j["version"] = 1;
  j["services"] = nlohmann::json::array();
  for (const auto& s : services_) j["services"].push_back(s.str());
  j["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) j["trees"].push_back(t.to_json());
  return j;
}

RandomForest RandomForest::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "pbscale-forest") throw Error("not a pbscale forest model");
  std::vector<ServiceId> services;
  for (const auto& s : j.at("services")) services.emplace_back(s.get<std::string>());
  std::vector<DecisionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(DecisionTree::from_json(t));
  return RandomForest(std::move(trees), std::move(services));
}

TrainingMatrix to_matrix(const Dataset& data) {
  data.validate();
  TrainingMatrix m;
  for (std::size_t i = 0; i < data.size(); ++i) {
    m.x.push_back(data.row(i));
    m.y.push_back(data.samples[i].label);
  }
  return m;
}

RandomForest train_forest(const Dataset& data, const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees < 1) throw Error("n_trees must be >= 1");
  if (data.size() == 0) throw Error("empty training set");
  const auto m = to_matrix(data);
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_samples_leaf = params.min_samples_leaf;
  tp.max_features =
      params.sqrt_features
          ? std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(data.dims())))))
          : 0;
  const std::size_t n = data.size();
  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    std::vector<std::size_t> idx(n);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& i : idx) i = pick(rng);
    } else {
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    }
    trees.push_back(train_tree(m, idx, tp, rng));
  }
  return RandomForest(std::move(trees), data.services);
}

double Evaluation::precision() const { return tp + fp == 0 ? 0.0 : double(tp) / (tp + fp); }
double Evaluation::recall() const { return tp + fn == 0 ? 0.0 : double(tp) / (tp + fn); }
double Evaluation::accuracy() const {
  const int n = tp + fp + tn + fn;
  return n == 0 ? 0.0 : double(tp + tn) / n;
}

namespace {

template <class Model>
Evaluation evaluate_impl(const Model& model, const Dataset& data) {
  data.validate();
  Evaluation e;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int pred = model.predict(std::span<const double>(data.row(i)));
    const int truth = data.samples[i].label;
    if (pred == 1) {
      (truth == 1 ? e.tp : e.fp)++;
    } else {
      (truth == 0 ? e.tn : e.fn)++;
    }
  }
  return e;
}

}  // namespace

Evaluation evaluate(const RandomForest& model, const Dataset& data) {
  if (model.services() != data.services) throw Error("dataset services do not match the model");
  return evaluate_impl(model, data);
}

Evaluation evaluate(const DecisionTree& tree, const Dataset& data) {
  return evaluate_impl(tree, data);
}

void save_model(std::ostream& out, const RandomForest& model) { out << model.to_json().dump(); }

RandomForest load_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("cannot parse model: ") + e.what());
  }
  return RandomForest::from_json(j);
}

void save_model(const std::string& path, const RandomForest& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  save_model(out, model);
}

RandomForest load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return load_model(in);
}

}  // namespace pbscale::predictor
