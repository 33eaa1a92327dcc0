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
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pbscale/metrics/metric_window.hpp"
#include "pbscale/sim/cluster.hpp"
#include "pbscale/sim/scenario.hpp"

namespace pbscale::predictor {

using metrics::ServiceId;

constexpr int kViolation = 0;
constexpr int kNoViolation = 1;

/// One labelled observation: replicas r and workloads w of every service in
/// a fixed order, label 1 when the entry P90 stayed within the SLO.
struct TrainingSample {
  std::vector<int> replicas;
  std::vector<double> workloads;
  int label = kNoViolation;
};

/// Feature vector r ++ w.
std::vector<double> features(std::span<const int> replicas, std::span<const double> workloads);

struct Dataset {
  std::vector<ServiceId> services;  // order of r and w
  std::vector<TrainingSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t dims() const noexcept { return 2 * services.size(); }
  std::size_t count(int label) const;
  std::vector<std::string> feature_names() const;
  std::vector<double> row(std::size_t i) const;

  /// Throws unless every sample has the dataset's dimensionality and a 0/1 label.
  void validate() const;
};

// CSV with header r_<svc>...,w_<svc>...,label.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

/// Seeded stratified split; returns (train, test).
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed);

struct PolicyContext {
  int episode = 0;
  double t = 0.0;
  std::mt19937_64* rng = nullptr;
};

/// Chooses the replicas for the next tick while a dataset is being collected.
using ReplicaPolicy = std::function<sim::ClusterState(
    const sim::ClusterState&, const metrics::MetricWindow&, PolicyContext&)>;

/// Stochastic collection policy: every `hold_ticks` ticks each service's
/// replica count moves by -1, 0 or +1 with equal probability, within
/// [1, max_replicas].
ReplicaPolicy random_policy(int hold_ticks = 3);

/// Runs `base`, then every `hold_ticks` ticks moves each service by a
/// uniform offset in [-spread, spread], clamped to [1, max_replicas].
ReplicaPolicy jittered(ReplicaPolicy base, int spread = 1, int hold_ticks = 3);

/// Uses policies[episode % size] for each episode.
ReplicaPolicy alternate_policies(std::vector<ReplicaPolicy> policies);

struct DatasetOptions {
  double episode_duration = 300.0;  // s per episode
  double min_base_rps = 20.0;
  double max_base_rps = 110.0;
  double max_amplitude = 120.0;
};

/// Runs `episodes` simulated episodes on random workloads under `policy`;
/// every collection tick becomes one sample labelled by entry P90 vs SLO.
Dataset generate_dataset(const sim::Scenario& scenario, int episodes, const ReplicaPolicy& policy,
                         std::uint64_t seed, const DatasetOptions& options = {});

}  // namespace pbscale::predictor
