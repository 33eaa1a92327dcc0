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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pbscale/controller/config.hpp"
#include "pbscale/controller/cost.hpp"
#include "pbscale/predictor/forest.hpp"
#include "pbscale/sim/scenario.hpp"
#include "pbscale/sim/workload.hpp"

namespace pbscale::controller {

enum class Policy { none, khpa, pbscale };
std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view name);

struct TickRecord {
  double t = 0.0;
  double rps = 0.0;
  double entry_p90 = 0.0;  // ms
  std::vector<int> replicas;
  double cpu = 0.0;  // vCPU over all services
  double mem = 0.0;  // GB over all services
};

struct DecisionRecord {
  double t = 0.0;
  std::string kind;
  std::vector<metrics::ServiceId> abnormal;
  std::vector<metrics::ServiceId> ranking;
  std::vector<metrics::ServiceId> targets;
  std::map<metrics::ServiceId, int> changes;
  std::string warning;
};

struct ExperimentReport {
  std::string scenario;
  Policy policy = Policy::none;
  std::uint64_t seed = 0;
  double slo = 0.0;
  double interval = 0.0;
  PriceSchedule prices;
  std::vector<metrics::ServiceId> services;
  std::vector<TickRecord> ticks;
  std::vector<DecisionRecord> decisions;
  int violations = 0;
  double violation_rate = 0.0;  // percent of ticks
  double cost = 0.0;            // dollars

  std::vector<double> latencies() const;
  nlohmann::json to_json() const;
  /// t,rps,entry_p90,violation,cpu,mem,cost,r_<svc>...
  void write_csv(std::ostream& out) const;
};

/// 100 * #(latency > slo) / #samples.
double violation_rate(std::span<const double> latencies, double slo);

struct TrainingOptions {
  int episodes = 30;
  predictor::DatasetOptions dataset;
  predictor::ForestParams forest;
};

/// Samples from alternating random and KHPA episodes.
predictor::Dataset default_dataset(const sim::Scenario& scenario, const ControllerConfig& config,
                                   std::uint64_t seed, const TrainingOptions& options = {});

predictor::RandomForest train_default_model(const sim::Scenario& scenario,
                                            const ControllerConfig& config, std::uint64_t seed,
                                            const TrainingOptions& options = {});

struct ExperimentOptions {
  ControllerConfig config;
  PriceSchedule prices;
  /// pbscale only; trained from the scenario when null.
  const predictor::RandomForest* model = nullptr;
  TrainingOptions training;
};

/// Steps the simulator through `trace`, invoking `policy` every inspection
/// interval. Identical inputs give identical reports.
ExperimentReport run_experiment(const sim::Scenario& scenario, Policy policy,
                                const sim::WorkloadTrace& trace, std::uint64_t seed,
                                const ExperimentOptions& options);

/// Same as above with the scenario's own controller config.
ExperimentReport run_experiment(const sim::Scenario& scenario, Policy policy,
                                const sim::WorkloadTrace& trace, std::uint64_t seed);

}  // namespace pbscale::controller
