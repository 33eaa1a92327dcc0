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

#include "json.hpp"

#include "pbscale/analysis/toporank.hpp"
#include "pbscale/controller/accuracy.hpp"
#include "pbscale/controller/config.hpp"
#include "pbscale/sim/scenario.hpp"

namespace pbscale::controller {

struct RcaOptions {
  int cases_per_kind = 10;
  double min_rps = 60.0;  // per-case mean entry load, drawn from [min_rps, max_rps]
  double max_rps = 120.0;
  double jitter = 0.1;    // relative per-tick load jitter
  double onset = 300.0;   // s, fault start
  double min_util = 0.5;  // when max_util > 0, every service is provisioned for a target
  double max_util = 0.9;  // utilization drawn from [min_util, max_util]
  double delay = 30.0;    // s after onset before the first localization attempt
  double horizon = 120.0; // s after onset to wait for a detection
  double margin = 1.5;    // target latency over the detection threshold
};

struct RcaCase {
  metrics::ServiceId target;
  sim::FaultKind kind = sim::FaultKind::cpu_overload;
  double severity = 1.0;
  double detected_at = -1.0;  // s, -1 if never detected
  std::vector<metrics::ServiceId> abnormal;
  analysis::RankingList toporank;
  analysis::RankingList ablation;
};

struct RcaSummary {
  std::vector<RcaCase> cases;
  double ac1 = 0.0;
  double avg5 = 0.0;
  double ablation_ac1 = 0.0;
  double ablation_avg5 = 0.0;

  std::vector<RcaOutcome> outcomes(bool ablation) const;
  nlohmann::json to_json() const;
};

/// Smallest severity on a fixed ladder that lifts the target's noise-free
/// latency, at the replicas of `state`, to `margin` times the detection
/// threshold.
double calibrate_severity(const sim::ClusterState& state, const metrics::ServiceId& target,
                          sim::FaultKind kind, double rps, double threshold, double margin);

/// cases_per_kind cases per fault kind, cycling over the services as targets.
/// Each case runs a steady load, injects the fault at `onset` and localizes
/// at the first inspection at least `delay` seconds later that sees a
/// violation.
RcaSummary rca_benchmark(const sim::Scenario& scenario, const ControllerConfig& config,
                         std::uint64_t seed, const RcaOptions& options = {});

}  // namespace pbscale::controller
