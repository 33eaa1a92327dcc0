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

#include "pbscale/optimizer/decision.hpp"

#include <algorithm>

#include "pbscale/error.hpp"

namespace pbscale::optimizer {

std::map<ServiceId, int> Decision::changes(std::span<const ServiceId> services,
                                           std::span<const int> current) const {
  std::map<ServiceId, int> out;
  for (std::size_t i = 0; i < services.size(); ++i) {
    const auto it = replicas.find(services[i]);
    if (it != replicas.end() && it->second != current[i]) out.emplace(services[i], it->second);
  }
  return out;
}

Decision decide(std::span<const ServiceId> candidates, Direction direction,
                std::span<const ServiceId> services, std::span<const int> current,
                std::span<const double> workloads, const Predictor& predictor,
                const DecisionParams& params) {
  if (services.size() != current.size() || services.size() != workloads.size()) {
    throw Error("service, replica and workload vectors differ in length");
  }
  if (params.k < 1) throw Error("k must be >= 1");
  if (candidates.empty()) {
    throw Error(direction == Direction::scale_up ? "empty bottleneck ranking"
                                                 : "no redundant services");
  }

  std::size_t take = candidates.size();
  if (direction == Direction::scale_up) take = std::min(take, static_cast<std::size_t>(params.k));

  std::vector<ServiceId> targets;
  std::vector<int> target_current;
  std::vector<std::size_t> positions;
  for (std::size_t c = 0; c < take; ++c) {
    const auto it = std::find(services.begin(), services.end(), candidates[c]);
    if (it == services.end()) throw Error("unknown service " + candidates[c].str());
    const auto pos = static_cast<std::size_t>(it - services.begin());
    targets.push_back(candidates[c]);
    target_current.push_back(current[pos]);
    positions.push_back(pos);
  }

  const auto bounds = bounds_for(direction, targets, target_current, params.c_max, params.gamma);

  FitnessContext ctx;
  ctx.base_replicas.assign(current.begin(), current.end());
  ctx.workloads.assign(workloads.begin(), workloads.end());
  ctx.lambda = params.lambda;
  ctx.c_max = params.c_max;
  ctx.predictor = predictor;
  for (const auto& g : bounds.genes) {
    const auto it = std::find(targets.begin(), targets.end(), g.id);
    ctx.positions.push_back(positions[static_cast<std::size_t>(it - targets.begin())]);
  }

  Decision d;
  d.direction = direction;
  d.dropped = bounds.dropped;
  for (const auto& g : bounds.genes) d.targets.push_back(g.id);
  d.ga = ga_optimize(bounds, ctx, params.ga);
  const auto merged = ctx.merge(d.ga.best);
  for (std::size_t i = 0; i < services.size(); ++i) d.replicas.emplace(services[i], merged[i]);
  return d;
}

}  // namespace pbscale::optimizer
