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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pbscale/analysis/detection.hpp"
#include "pbscale/analysis/toporank.hpp"
#include "pbscale/controller/config.hpp"
#include "pbscale/optimizer/genetic.hpp"
#include "pbscale/sim/cluster.hpp"

namespace pbscale::controller {

using metrics::ServiceId;

enum class ActionKind { none, scale_up, scale_down };
std::string_view to_string(ActionKind kind);

struct Action {
  ActionKind kind = ActionKind::none;
  double time = 0.0;
  std::vector<ServiceId> abnormal;
  analysis::RankingList ranking;
  std::vector<ServiceId> redundant;
  std::vector<ServiceId> targets;
  std::map<ServiceId, int> changes;  // new replica counts of the services that moved
  std::string warning;
};

struct TickResult {
  Action action;
  sim::ClusterState state;
};

/// One inspection of the control loop: violations lead to localization and a
/// scale-up, otherwise redundant services are scaled down. Never throws from
/// tick(); failures come back as a no-op carrying a warning.
class Controller {
 public:
  /// `seed` feeds the optimizer; each tick derives its own stream from it.
  Controller(ControllerConfig config, optimizer::Predictor predictor, std::uint64_t seed = 0);

  TickResult tick(const sim::ClusterState& state, const metrics::MetricWindow& window, double t);

  const ControllerConfig& config() const noexcept { return config_; }
  /// Time each service was last scaled.
  const std::map<ServiceId, double>& last_scaled() const noexcept { return last_scaled_; }
  /// Workload each service saw over the analysis span when it was last
  /// scaled; redundancy is judged against it.
  const std::map<ServiceId, std::vector<double>>& sized_for() const noexcept {
    return sized_for_;
  }

 private:
  bool cooling(const ServiceId& id, double t) const;
  Action plan(const sim::ClusterState& state, const metrics::MetricWindow& window, double t);

  ControllerConfig config_;
  optimizer::Predictor predictor_;
  std::uint64_t seed_;
  std::map<ServiceId, double> last_scaled_;
  std::map<ServiceId, std::vector<double>> sized_for_;
};

/// Anomaly degrees over the analysis span for the services found abnormal in
/// the most recent inspection interval.
analysis::AbnormalSet inspect(const metrics::ServiceGraph& graph,
                              const metrics::MetricWindow& window,
                              const ControllerConfig& config);

}  // namespace pbscale::controller
