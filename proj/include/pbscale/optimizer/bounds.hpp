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

#include <span>
#include <string_view>
#include <vector>

#include "pbscale/metrics/service_graph.hpp"

namespace pbscale::optimizer {

using metrics::ServiceId;

enum class Direction { scale_up, scale_down };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

struct GeneBounds {
  ServiceId id;
  int current = 1;
  int lower = 1;
  int upper = 1;
};

/// Feasible replica interval per bottleneck. Scale-up uses [c+1, c_max],
/// scale-down [max(c-gamma, 1), c]. Scale-up targets already at c_max land
/// in `dropped`.
struct StrategyBounds {
  Direction direction = Direction::scale_up;
  std::vector<GeneBounds> genes;
  std::vector<ServiceId> dropped;

  std::size_t size() const noexcept { return genes.size(); }
  bool contains(std::span<const int> x) const;
};

/// `current[i]` is the replica count of `targets[i]`. Throws
/// "nothing to optimize" when no target survives.
StrategyBounds bounds_for(Direction direction, std::span<const ServiceId> targets,
                          std::span<const int> current, int c_max, int gamma);

}  // namespace pbscale::optimizer
