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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "pbscale/sim/cluster.hpp"
#include "pbscale/sim/workload.hpp"

namespace pbscale::sim {

struct WorkloadSpec {
  WorkloadPattern pattern = WorkloadPattern::single_peak;
  double duration = 1200.0;  // s
  double base_rps = 50.0;
  double amplitude = 100.0;
};

/// Everything needed to stand up a simulated application. Loaded from a JSON
/// scenario file (schema in README.md); `document` keeps the parsed file so
/// other layers can read their own sections (e.g. "controller").
struct Scenario {
  std::string name;
  std::shared_ptr<const ClusterModel> model;
  double slo = 500.0;          // ms, end-to-end P90 target
  double interval = 5.0;       // s, metric collection interval
  double startup_lag = 0.0;    // s between a scaling decision and new replicas serving
  std::vector<FaultInjection> faults;
  WorkloadSpec workload;
  nlohmann::json document;

  /// Initial replicas with the scenario's faults injected.
  ClusterState initial_state() const;
  WorkloadTrace make_trace(std::uint64_t seed) const;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

/// Ten stateless services shaped like the Online Boutique demo shop.
Scenario online_boutique();

}  // namespace pbscale::sim
