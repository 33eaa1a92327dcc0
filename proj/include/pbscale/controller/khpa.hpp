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

#include "pbscale/metrics/metric_window.hpp"
#include "pbscale/predictor/dataset.hpp"
#include "pbscale/sim/cluster.hpp"

namespace pbscale::controller {

/// ceil(total_cpu / threshold) clamped to [1, c_max].
int khpa_replicas(double total_cpu, double threshold, int c_max);

/// Threshold autoscaler baseline. Uses each service's mean CPU usage over the
/// trailing `span` seconds (the whole window if shorter).
sim::ClusterState khpa_tick(const sim::ClusterState& state, const metrics::MetricWindow& window,
                            double threshold, int c_max, double span = 15.0);

/// KHPA as a dataset collection policy, acting every `every_ticks` ticks.
predictor::ReplicaPolicy khpa_policy(double threshold, int c_max, int every_ticks = 3);

}  // namespace pbscale::controller
