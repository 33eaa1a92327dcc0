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

#include "pbscale/analysis/detection.hpp"

#include "pbscale/error.hpp"

namespace pbscale::analysis {

int AbnormalSet::count(const ServiceId& id) const {
  auto it = violation_counts.find(id);
  return it == violation_counts.end() ? 0 : it->second;
}

std::vector<ServiceId> AbnormalSet::services() const {
  std::vector<ServiceId> out;
  out.reserve(violation_counts.size());
  for (const auto& [id, n] : violation_counts) out.push_back(id);
  return out;
}

double detection_threshold(double slo, double alpha) { return slo * (1.0 + alpha / 2.0); }

AbnormalSet detect_slo_violations(const ServiceGraph& graph, const MetricWindow& window,
                                  double slo, double alpha) {
  if (!(slo > 0.0)) throw Error("slo must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must be in [0, 1]");
  const double threshold = detection_threshold(slo, alpha);

  AbnormalSet result;
  for (ServiceGraph::Index i = 0; i < graph.size(); ++i) {
    const ServiceId& callee = graph.id(i);
    int violations = 0;
    const auto callers = graph.callers(i);
    for (const auto& snap : window.snapshots()) {
      if (callers.empty()) {
        if (snap.at(callee).p90_latency > threshold) ++violations;
        continue;
      }
      for (auto j : callers) {
        auto it = snap.edge_p90.find({graph.id(j), callee});
        if (it == snap.edge_p90.end()) {
          throw Error("no latency recorded for edge " + graph.id(j).str() + " -> " + callee.str());
        }
        if (it->second > threshold) ++violations;
      }
    }
    if (violations > 0) result.violation_counts.emplace(callee, violations);
  }
  return result;
}

}  // namespace pbscale::analysis
