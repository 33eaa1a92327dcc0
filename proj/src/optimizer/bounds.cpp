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

#include "pbscale/optimizer/bounds.hpp"

#include <algorithm>
#include <string>

#include "pbscale/error.hpp"

namespace pbscale::optimizer {

std::string_view to_string(Direction d) {
  return d == Direction::scale_up ? "scale-up" : "scale-down";
}

Direction parse_direction(std::string_view s) {
  if (s == "scale-up" || s == "up") return Direction::scale_up;
  if (s == "scale-down" || s == "down") return Direction::scale_down;
  throw Error("unknown scaling direction '" + std::string(s) + "'");
}

bool StrategyBounds::contains(std::span<const int> x) const {
  if (x.size() != genes.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < genes[i].lower || x[i] > genes[i].upper) return false;
  }
  return true;
}

StrategyBounds bounds_for(Direction direction, std::span<const ServiceId> targets,
                          std::span<const int> current, int c_max, int gamma) {
  if (targets.size() != current.size()) throw Error("targets and replica counts differ in length");
  if (c_max < 1) throw Error("c_max must be >= 1");
  if (gamma < 0) throw Error("gamma must be >= 0");
  StrategyBounds b;
  b.direction = direction;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int c = current[i];
    if (c < 1 || c > c_max) {
      throw Error("replica count of " + targets[i].str() + " outside [1, c_max]");
    }
    if (std::any_of(b.genes.begin(), b.genes.end(),
                    [&](const GeneBounds& g) { return g.id == targets[i]; })) {
      throw Error("duplicate target " + targets[i].str());
    }
    if (direction == Direction::scale_up) {
      if (c + 1 > c_max) {
        b.dropped.push_back(targets[i]);
        continue;
      }
      b.genes.push_back({targets[i], c, c + 1, c_max});
    } else {
      b.genes.push_back({targets[i], c, std::max(c - gamma, 1), c});
    }
  }
  if (b.genes.empty()) throw Error("nothing to optimize");
  return b;
}

}  // namespace pbscale::optimizer
