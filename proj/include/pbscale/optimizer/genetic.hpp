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
#include <functional>
#include <span>
#include <vector>

#include "pbscale/optimizer/bounds.hpp"

namespace pbscale::optimizer {

/// Returns 1 when the full replica vector is expected to meet the SLO under
/// the given workloads, 0 otherwise.
using Predictor = std::function<int(std::span<const int>, std::span<const double>)>;

struct FitnessContext {
  std::vector<int> base_replicas;      // r', every service
  std::vector<std::size_t> positions;  // gene i overwrites base_replicas[positions[i]]
  std::vector<double> workloads;
  double lambda = 0.9;
  int c_max = 8;
  Predictor predictor;

  void validate(const StrategyBounds& bounds) const;
  std::vector<int> merge(std::span<const int> x) const;
};

/// lambda * R1 + (1 - lambda) * R2 where R1 is the predictor verdict and
/// R2 = 1 - sum(x) / (c_max * n). Throws if x leaves its bounds.
double fitness(std::span<const int> x, const StrategyBounds& bounds, const FitnessContext& ctx);

struct GaParams {
  int iterations = 20;
  int population = 40;
  int elites = 4;
  double p_crossover = 0.9;
  double p_mutation = 0.1;
  int tournament = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GenerationStats {
  int generation = 0;  // 0 is the initial population
  double best = 0.0;   // best so far
  double mean = 0.0;   // mean of the current population
};

struct GaResult {
  std::vector<int> best;
  double best_fitness = 0.0;
  int best_generation = 0;  // first generation holding best_fitness
  int evaluations = 0;
  std::vector<GenerationStats> history;
};

using EvaluationHook = std::function<void(std::span<const int>)>;

GaResult ga_optimize(const StrategyBounds& bounds, const FitnessContext& ctx,
                     const GaParams& params, const EvaluationHook& on_evaluate = {});

}  // namespace pbscale::optimizer
