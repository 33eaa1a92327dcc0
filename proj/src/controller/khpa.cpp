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

#include "pbscale/controller/khpa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "pbscale/error.hpp"
#include "pbscale/metrics/stats.hpp"

namespace pbscale::controller {

int khpa_replicas(double total_cpu, double threshold, int c_max) {
  if (!(threshold > 0.0)) throw Error("KHPA threshold must be > 0");
  if (c_max < 1) throw Error("c_max must be >= 1");
  const double want = std::ceil(std::max(0.0, total_cpu) / threshold - 1e-9);
  return static_cast<int>(std::clamp(want, 1.0, static_cast<double>(c_max)));
}

sim::ClusterState khpa_tick(const sim::ClusterState& state, const metrics::MetricWindow& window,
                            double threshold, int c_max, double span) {
  if (window.empty()) return state;
  const double interval = window.interval();
  const double usable =
      std::min(window.duration(), std::max(interval, std::floor(span / interval + 1e-9) * interval));
  std::map<metrics::ServiceId, int> strategy;
  for (const auto& spec : state.model().specs()) {
    const auto cpu = window.query(spec.id, metrics::MetricKind::cpu, usable);
    const int limit = std::min(c_max, spec.max_replicas);
    strategy[spec.id] = khpa_replicas(metrics::mean(cpu), threshold, limit);
  }
  return sim::apply_scaling(state, strategy);
}

predictor::ReplicaPolicy khpa_policy(double threshold, int c_max, int every_ticks) {
  if (every_ticks < 1) throw Error("every_ticks must be >= 1");
  auto ticks = std::make_shared<int>(0);
  return [=](const sim::ClusterState& state, const metrics::MetricWindow& window,
             predictor::PolicyContext&) {
    if (window.empty() || ++*ticks % every_ticks != 0) return state;
    return khpa_tick(state, window, threshold, c_max,
                     window.interval() * static_cast<double>(every_ticks));
  };
}

}  // namespace pbscale::controller
