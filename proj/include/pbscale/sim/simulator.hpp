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
#include <vector>

#include "pbscale/metrics/metric_window.hpp"
#include "pbscale/sim/cluster.hpp"

namespace pbscale::sim {

/// Internal quantities behind one service's reported metrics.
struct ServiceDetail {
  double demand = 0.0;           // requests/s routed to the service
  double utilization = 0.0;      // rho, after fault multipliers
  double own_latency = 0.0;      // ms, queueing term incl. noise
  double e2e_latency = 0.0;      // ms, own + downstream composition
  double inbound_latency = 0.0;  // ms, e2e as seen by callers (network faults applied)
};

struct StepResult {
  metrics::MetricSnapshot snapshot;
  std::vector<ServiceDetail> details;  // aligned with model graph order

  /// End-to-end P90 of the entry service, what users observe.
  double entry_latency = 0.0;
};

/// Queueing latency of one service at utilization `rho`:
/// service_time * min(1 / max(eps, 1 - rho), k_sat * (1 + rho)).
/// Continuous and non-decreasing in rho; finite when saturated.
double queueing_latency(double service_time, double rho, const SimOptions& options);

/// One collection interval of the application at entry rate `rps_in`.
/// Pure: the noise stream is a function of (seed, t, service) only.
StepResult step(const ClusterState& state, double rps_in, double t, std::uint64_t seed);

}  // namespace pbscale::sim
