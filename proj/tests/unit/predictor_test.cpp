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

#include <algorithm>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "pbscale/error.hpp"
#include "pbscale/predictor/dataset.hpp"
#include "pbscale/predictor/forest.hpp"
#include "pbscale/predictor/tree.hpp"
#include "pbscale/sim/scenario.hpp"

using namespace pbscale;
using namespace pbscale::predictor;
using pbscale::testing::Gen;

namespace {

// Two services; no violation iff replicas of "a" cover its workload at 40 rps each.
Dataset capacity_dataset(Gen& g, std::size_t n) {
  Dataset d;
  d.services = {"a", "b"};
  for (std::size_t i = 0; i < n; ++i) {
    TrainingSample s;
    s.replicas = {g.integer(1, 8), g.integer(1, 8)};
    s.workloads = {g.real(0.0, 320.0), g.real(0.0, 320.0)};
    s.label = s.workloads[0] < 40.0 * s.replicas[0] ? kNoViolation : kViolation;
    d.samples.push_back(s);
  }
  return d;
}

TrainingMatrix xor_matrix() {
  TrainingMatrix m;
  for (int rep = 0; rep < 5; ++rep) {
    for (int a : {0, 1}) {
      for (int b : {0, 1}) {
        m.x.push_back({static_cast<double>(a), static_cast<double>(b)});
        m.y.push_back(a ^ b);
      }
    }
  }
  return m;
}

}  // namespace

TEST_CASE("features put replicas before workloads") {
  const std::vector<int> r = {3, 1};
  const std::vector<double> w = {12.5, 7.0};
  CHECK(features(r, w) == std::vector<double>{3.0, 1.0, 12.5, 7.0});
  Dataset d;
  d.services = {"x", "y"};
  CHECK(d.feature_names() == std::vector<std::string>{"r_x", "r_y", "w_x", "w_y"});
}

TEST_CASE("dataset csv round trip and validation") {
  Gen g(31);
  const auto d = capacity_dataset(g, 50);
  std::stringstream buf;
  write_dataset_csv(buf, d);
  const auto back = read_dataset_csv(buf);
  CHECK(back.services == d.services);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.samples[i].replicas == d.samples[i].replicas);
    CHECK(back.samples[i].label == d.samples[i].label);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(back.samples[i].workloads[j] == doctest::Approx(d.samples[i].workloads[j]).epsilon(1e-12));
    }
  }
  std::stringstream bad("r_a,w_b,label\n1,2,0\n");
  CHECK_THROWS(read_dataset_csv(bad));
  auto broken = d;
  broken.samples[0].label = 2;
  CHECK_THROWS(broken.validate());
  broken = d;
  broken.samples[0].replicas.push_back(1);
  CHECK_THROWS(broken.validate());
}

TEST_CASE("stratified split keeps class proportions and partitions the data") {
  Gen g(32);
  const auto d = capacity_dataset(g, 500);
  const auto [train, test] = stratified_split(d, 0.2, 7);
  CHECK(train.size() + test.size() == d.size());
  for (int label : {kViolation, kNoViolation}) {
    const auto expected = static_cast<double>(d.count(label)) * 0.2;
    CHECK(std::abs(static_cast<double>(test.count(label)) - expected) <= 0.5);
  }
  const auto again = stratified_split(d, 0.2, 7);
  CHECK(again.second.size() == test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    CHECK(again.second.samples[i].workloads == test.samples[i].workloads);
  }
  CHECK_THROWS(stratified_split(d, 1.0, 7));
}

TEST_CASE("decision tree examples") {
  TrainingMatrix sep;
  for (int i = 0; i < 20; ++i) {
    sep.x.push_back({static_cast<double>(i)});
    sep.y.push_back(i < 10 ? 0 : 1);
  }
  const auto t = train_tree(sep, TreeParams{});
  CHECK(t.depth() == 1);
  CHECK(t.predict(std::vector<double>{3.0}) == 0);
  CHECK(t.predict(std::vector<double>{15.0}) == 1);

  TrainingMatrix pure;
  pure.x = {{1.0}, {2.0}, {3.0}};
  pure.y = {1, 1, 1};
  const auto leaf = train_tree(pure, TreeParams{});
  CHECK(leaf.degenerate());
  CHECK(leaf.predict(std::vector<double>{-100.0}) == 1);

  const auto x = train_tree(xor_matrix(), TreeParams{});
  CHECK(x.depth() >= 2);
  for (int a : {0, 1}) {
    for (int b : {0, 1}) {
      CHECK(x.predict(std::vector<double>{double(a), double(b)}) == (a ^ b));
    }
  }

  TreeParams shallow;
  shallow.max_depth = 0;
  CHECK(train_tree(xor_matrix(), shallow).degenerate());

  CHECK(DecisionTree::from_json(x.to_json()).to_json() == x.to_json());
  CHECK_THROWS(x.predict(std::vector<double>{1.0}));
  TrainingMatrix ragged;
  ragged.x = {{1.0}, {1.0, 2.0}};
  ragged.y = {0, 1};
  CHECK_THROWS(train_tree(ragged, TreeParams{}));
}

TEST_CASE("trees respect depth and leaf-size limits on random data") {
  Gen g(33);
  for (int trial = 0; trial < 40; ++trial) {
    TrainingMatrix m;
    const int n = g.integer(5, 80);
    for (int i = 0; i < n; ++i) {
      m.x.push_back({g.real(0, 1), g.real(0, 1), g.real(0, 1)});
      m.y.push_back(g.coin() ? 1 : 0);
    }
    TreeParams p;
    p.max_depth = g.integer(0, 6);
    p.min_samples_leaf = g.integer(1, 5);
    p.max_features = g.integer(0, 3);
    const auto t = train_tree(m, p, static_cast<std::uint64_t>(trial));
    CHECK(t.depth() <= p.max_depth);
    for (const auto& node : t.nodes()) {
      if (node.feature < 0) {
        CHECK(node.samples >= p.min_samples_leaf);
        CHECK(node.p1 >= 0.0);
        CHECK(node.p1 <= 1.0);
      }
    }
  }
}

TEST_CASE("random forest") {
  Gen g(34);
  const auto d = capacity_dataset(g, 400);

  ForestParams single;
  single.n_trees = 1;
  single.bootstrap = false;
  single.sqrt_features = false;
  const auto one = train_forest(d, single, 3);
  TreeParams tp;
  tp.max_depth = single.max_depth;
  tp.min_samples_leaf = single.min_samples_leaf;
  const auto tree = train_tree(to_matrix(d), tp);
  CHECK(one.trees()[0].to_json() == tree.to_json());

  TrainingMatrix sep;
  Dataset sep_data;
  sep_data.services = {"a"};
  for (int i = 0; i < 40; ++i) sep_data.samples.push_back({{1 + i % 8}, {double(i)}, i < 20 ? 0 : 1});
  ForestParams p20;
  p20.n_trees = 20;
  const auto sep_forest = train_forest(sep_data, p20, 1);
  CHECK(evaluate(sep_forest, sep_data).accuracy() == 1.0);

  // an even split of votes predicts a violation
  DecisionTree yes({DecisionTree::Node{-1, 0.0, -1, -1, 1, 1.0, 5}}, 2);
  DecisionTree no({DecisionTree::Node{-1, 0.0, -1, -1, 0, 0.0, 5}}, 2);
  const RandomForest tied({yes, no}, {"a"});
  CHECK(tied.votes(std::vector<double>{1.0, 1.0}) == 1);
  CHECK(tied.predict(std::vector<double>{1.0, 1.0}) == 0);

  ForestParams fp;
  fp.n_trees = 10;
  const auto f = train_forest(d, fp, 5);
  std::stringstream buf;
  save_model(buf, f);
  const auto loaded = load_model(buf);
  CHECK(loaded.services() == f.services());
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(loaded.predict(d.row(i)) == f.predict(d.row(i)));
  CHECK(train_forest(d, fp, 5).to_json() == f.to_json());

  CHECK_THROWS(f.predict(std::vector<double>{1.0, 2.0, 3.0}));
  fp.n_trees = 0;
  CHECK_THROWS(train_forest(d, fp, 5));
}

TEST_CASE("evaluation arithmetic") {
  Dataset d;
  d.services = {"a"};
  for (int i = 0; i < 10; ++i) d.samples.push_back({{1}, {double(i)}, i % 2});
  DecisionTree always({DecisionTree::Node{-1, 0.0, -1, -1, 1, 1.0, 10}}, 2);
  const auto e = evaluate(always, d);
  CHECK(e.tp == 5);
  CHECK(e.fp == 5);
  CHECK(e.recall() == 1.0);
  CHECK(e.precision() == 0.5);
  CHECK(e.accuracy() == 0.5);
  CHECK(Evaluation{}.precision() == 0.0);
}

TEST_CASE("generated datasets") {
  const auto scenario = sim::online_boutique();
  const auto policy = random_policy();
  const auto d = generate_dataset(scenario, 6, policy, 11);
  CHECK(d.size() == 6 * 60);
  CHECK(d.services == scenario.model->graph().services());
  d.validate();
  CHECK(d.count(kViolation) >= d.size() / 10);
  CHECK(d.count(kNoViolation) >= d.size() / 10);
  for (const auto& s : d.samples) {
    for (int r : s.replicas) {
      CHECK(r >= 1);
      CHECK(r <= 8);
    }
  }
  const auto again = generate_dataset(scenario, 6, random_policy(), 11);
  std::stringstream a;
  std::stringstream b;
  write_dataset_csv(a, d);
  write_dataset_csv(b, again);
  CHECK(a.str() == b.str());
  CHECK_THROWS(generate_dataset(scenario, 0, policy, 11));
  CHECK_THROWS(random_policy(0));
  CHECK_THROWS(alternate_policies({}));
}

TEST_CASE("a trained forest mostly agrees that more replicas help") {
  Gen g(35);
  const auto d = capacity_dataset(g, 1500);
  const auto f = train_forest(d, ForestParams{}, 9);
  int monotone = 0;
  int total = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<int> r = {g.integer(1, 7), g.integer(1, 8)};
    const std::vector<double> w = {g.real(0.0, 320.0), g.real(0.0, 320.0)};
    const int before = f.predict(std::span<const int>(r), w);
    r[0] += 1;
    const int after = f.predict(std::span<const int>(r), w);
    monotone += after >= before ? 1 : 0;
    ++total;
  }
  MESSAGE("monotone in replicas on " << monotone << "/" << total << " probes");
  CHECK(monotone >= total * 9 / 10);
}
