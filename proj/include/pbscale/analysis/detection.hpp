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

#include <map>
#include <vector>

#include "pbscale/metrics/metric_window.hpp"
#include "pbscale/metrics/service_graph.hpp"

namespace pbscale::analysis {

using metrics::MetricWindow;
using metrics::ServiceGraph;
using metrics::ServiceId;

/// Services whose invocations broke the latency threshold, with the number of
/// violating edge samples (the anomaly degree) for each.
struct AbnormalSet {
  std::map<ServiceId, int> violation_counts;

  bool empty() const noexcept { return violation_counts.empty(); }
  std::size_t size() const noexcept { return violation_counts.size(); }
  bool contains(const ServiceId& id) const { return violation_counts.contains(id); }
  int count(const ServiceId& id) const;
  std::vector<ServiceId> services() const;
};

/// SLO * (1 + alpha / 2).
double detection_threshold(double slo, double alpha);

/// Scans every sample of `window`. For each service, every in-edge sample
/// whose P90 is strictly above the threshold adds one violation to the
/// callee. Services without callers (the entry) are checked against their
/// own externally observed P90 instead.
AbnormalSet detect_slo_violations(const ServiceGraph& graph, const MetricWindow& window,
                                  double slo, double alpha);

}  // namespace pbscale::analysis
