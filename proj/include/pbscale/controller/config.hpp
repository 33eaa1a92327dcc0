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

#include "json.hpp"

#include "pbscale/analysis/redundancy.hpp"
#include "pbscale/analysis/toporank.hpp"
#include "pbscale/optimizer/decision.hpp"
#include "pbscale/sim/scenario.hpp"

namespace pbscale::controller {

struct ControllerConfig {
  double slo = 500.0;  // ms
  double alpha = 0.2;
  double beta = 0.9;
  double cl = 0.05;
  double sigma = 1.0;
  double delta = 0.15;
  int gamma = 2;
  double lambda = 0.9;
  int k = 2;
  int c_max = 8;
  double inspect_interval = 15.0;  // s
  double collect_interval = 5.0;   // s
  double analysis_span = 60.0;     // s of history for degrees and correlation
  double cooldown = 30.0;          // s
  double khpa_threshold = 0.5;     // vCPU per replica
  optimizer::GaParams ga;

  void validate() const;

  analysis::TopoRankOptions toporank_options() const;
  analysis::RedundancyOptions redundancy_options() const;
  optimizer::DecisionParams decision_params() const;
};

/// Overlays the keys present in `section` on `base`.
ControllerConfig config_from_json(const nlohmann::json& section, ControllerConfig base = {});
nlohmann::json to_json(const ControllerConfig& config);

/// Defaults, then the scenario's SLO and interval, then its "controller"
/// section.
ControllerConfig config_for(const sim::Scenario& scenario);

}  // namespace pbscale::controller
