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
#include <span>
#include <vector>

#include "pbscale/optimizer/genetic.hpp"

namespace pbscale::optimizer {

struct DecisionParams {
  int k = 2;  // bottlenecks optimized on scale-up
  int c_max = 8;
  int gamma = 2;
  double lambda = 0.9;
  GaParams ga;
};

struct Decision {
  Direction direction = Direction::scale_up;
  std::vector<ServiceId> targets;  // genes actually optimized
  std::vector<ServiceId> dropped;
  std::map<ServiceId, int> replicas;  // final map over every service
  GaResult ga;

  /// Services whose count differs from `current`.
  std::map<ServiceId, int> changes(std::span<const ServiceId> services,
                                   std::span<const int> current) const;
};

/// Picks the optimized services (top-k of `candidates` for scale-up, all of
/// them for scale-down), runs the GA and merges the best strategy into the
/// current replica vector. `services`, `current` and `workloads` are aligned.
Decision decide(std::span<const ServiceId> candidates, Direction direction,
                std::span<const ServiceId> services, std::span<const int> current,
                std::span<const double> workloads, const Predictor& predictor,
                const DecisionParams& params);

}  // namespace pbscale::optimizer
