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

#include "pbscale/optimizer/genetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pbscale/error.hpp"

namespace pbscale::optimizer {

void FitnessContext::validate(const StrategyBounds& bounds) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must be in [0, 1]");
  if (c_max < 1) throw Error("c_max must be >= 1");
  if (!predictor) throw Error("fitness context has no predictor");
  if (positions.size() != bounds.size()) throw Error("gene positions do not match the bounds");
  for (auto p : positions) {
    if (p >= base_replicas.size()) throw Error("gene position out of range");
  }
}

std::vector<int> FitnessContext::merge(std::span<const int> x) const {
  if (x.size() != positions.size()) throw Error("chromosome length mismatch");
  std::vector<int> r = base_replicas;
  for (std::size_t i = 0; i < x.size(); ++i) r[positions[i]] = x[i];
  return r;
}

double fitness(std::span<const int> x, const StrategyBounds& bounds, const FitnessContext& ctx) {
  if (!bounds.contains(x)) throw Error("chromosome outside its bounds");
  const auto r = ctx.merge(x);
  const int verdict = ctx.predictor(r, ctx.workloads);
  const double r1 = verdict == 1 ? 1.0 : 0.0;
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  const double r2 = 1.0 - total / (static_cast<double>(ctx.c_max) * static_cast<double>(x.size()));
  return ctx.lambda * r1 + (1.0 - ctx.lambda) * r2;
}

void GaParams::validate() const {
  if (iterations < 0) throw Error("iterations must be >= 0");
  if (population < 2) throw Error("population must be >= 2");
  if (elites < 0 || elites >= population) throw Error("elites must be in [0, population)");
  if (!(p_crossover >= 0.0 && p_crossover <= 1.0) || !(p_mutation >= 0.0 && p_mutation <= 1.0)) {
    throw Error("GA probabilities must be in [0, 1]");
  }
  if (tournament < 1) throw Error("tournament size must be >= 1");
}

namespace {

struct Individual {
  std::vector<int> genes;
  double fitness = 0.0;
};

class Engine {
 public:
  Engine(const StrategyBounds& bounds, const FitnessContext& ctx, const GaParams& params,
         const EvaluationHook& hook)
      : bounds_(bounds), ctx_(ctx), params_(params), hook_(hook), rng_(params.seed) {}

  GaResult run() {
    std::vector<Individual> pop;
    for (int i = 0; i < params_.population; ++i) pop.push_back(evaluate(random_genes()));
    record(pop, 0);
    for (int gen = 1; gen <= params_.iterations; ++gen) {
      std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
        return a.fitness > b.fitness;
      });
      std::vector<Individual> next(pop.begin(), pop.begin() + params_.elites);
      const auto want = static_cast<std::size_t>(params_.population);
      while (next.size() < want) {
        auto a = tournament(pop).genes;
        auto b = tournament(pop).genes;
        if (unit_(rng_) < params_.p_crossover) crossover(a, b);
        mutate(a);
        mutate(b);
        next.push_back(evaluate(std::move(a)));
        if (next.size() < want) next.push_back(evaluate(std::move(b)));
      }
      pop = std::move(next);
      record(pop, gen);
    }
    return std::move(result_);
  }

 private:
  int draw(const GeneBounds& g) {
    return std::uniform_int_distribution<int>(g.lower, g.upper)(rng_);
  }

  std::vector<int> random_genes() {
    std::vector<int> x;
    for (const auto& g : bounds_.genes) x.push_back(draw(g));
    return x;
  }

  Individual evaluate(std::vector<int> x) {
    if (hook_) hook_(x);
    const double f = fitness(x, bounds_, ctx_);
    ++result_.evaluations;
    return {std::move(x), f};
  }

  const Individual& tournament(const std::vector<Individual>& pop) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const Individual* best = &pop[pick(rng_)];
    for (int i = 1; i < params_.tournament; ++i) {
      const Individual* c = &pop[pick(rng_)];
      if (c->fitness > best->fitness) best = c;
    }
    return *best;
  }

  void crossover(std::vector<int>& a, std::vector<int>& b) {
    const std::size_t n = a.size();
    if (n < 2) return;
    std::size_t lo = 1;
    std::size_t hi = n;
    if (n >= 3) {
      std::uniform_int_distribution<std::size_t> cut(1, n - 1);
      lo = cut(rng_);
      do {
        hi = cut(rng_);
      } while (hi == lo);
      if (hi < lo) std::swap(lo, hi);
    }
    for (std::size_t i = lo; i < hi; ++i) std::swap(a[i], b[i]);
  }

  void mutate(std::vector<int>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (unit_(rng_) < params_.p_mutation) x[i] = draw(bounds_.genes[i]);
    }
  }

  void record(const std::vector<Individual>& pop, int gen) {
    double sum = 0.0;
    for (const auto& ind : pop) {
      sum += ind.fitness;
      if (result_.best.empty() || ind.fitness > result_.best_fitness) {
        result_.best = ind.genes;
        result_.best_fitness = ind.fitness;
        result_.best_generation = gen;
      }
    }
    result_.history.push_back({gen, result_.best_fitness, sum / static_cast<double>(pop.size())});
  }

  const StrategyBounds& bounds_;
  const FitnessContext& ctx_;
  const GaParams& params_;
  const EvaluationHook& hook_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  GaResult result_;
};

}  // namespace

GaResult ga_optimize(const StrategyBounds& bounds, const FitnessContext& ctx,
                     const GaParams& params, const EvaluationHook& on_evaluate) {
  if (bounds.genes.empty()) throw Error("nothing to optimize");
  params.validate();
  ctx.validate(bounds);
  return Engine(bounds, ctx, params, on_evaluate).run();
}

}  // namespace pbscale::optimizer
