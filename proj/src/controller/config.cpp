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

#include "pbscale/controller/config.hpp"

#include <cmath>

#include "pbscale/error.hpp"

namespace pbscale::controller {

void ControllerConfig::validate() const {
  if (!(slo > 0.0)) throw Error("slo must be > 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must be in [0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("beta must be in (0, 1]");
  if (!(cl > 0.0 && cl < 1.0)) throw Error("cl must be in (0, 1)");
  if (!(sigma > 0.0)) throw Error("sigma must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must be in (0, 1)");
  if (gamma < 1) throw Error("gamma must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must be in [0, 1]");
  if (k < 1) throw Error("k must be >= 1");
  if (c_max < 1) throw Error("c_max must be >= 1");
  if (!(collect_interval > 0.0)) throw Error("collect_interval must be > 0");
  const double ratio = inspect_interval / collect_interval;
  if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw Error("inspect_interval must be a positive multiple of collect_interval");
  }
  const double aratio = analysis_span / collect_interval;
  if (!(analysis_span >= inspect_interval) || std::abs(aratio - std::round(aratio)) > 1e-9) {
    throw Error("analysis_span must be a multiple of collect_interval and >= inspect_interval");
  }
  if (!(cooldown >= 0.0)) throw Error("cooldown must be >= 0");
  if (!(khpa_threshold > 0.0)) throw Error("khpa threshold must be > 0");
  ga.validate();
}

analysis::TopoRankOptions ControllerConfig::toporank_options() const {
  analysis::TopoRankOptions o;
  o.sigma = sigma;
  o.series_span = analysis_span;
  o.pagerank.delta = delta;
  return o;
}

analysis::RedundancyOptions ControllerConfig::redundancy_options() const {
  analysis::RedundancyOptions o;
  o.beta = beta;
  o.cl = cl;
  o.current_span = analysis_span;
  o.past_span = analysis_span;
  return o;
}

optimizer::DecisionParams ControllerConfig::decision_params() const {
  optimizer::DecisionParams p;
  p.k = k;
  p.c_max = c_max;
  p.gamma = gamma;
  p.lambda = lambda;
  p.ga = ga;
  return p;
}

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ControllerConfig config_from_json(const nlohmann::json& j, ControllerConfig c) {
  if (!j.is_object()) throw Error("controller section must be an object");
  try {
    read(j, "slo_ms", c.slo);
    read(j, "alpha", c.alpha);
    read(j, "beta", c.beta);
    read(j, "cl", c.cl);
    read(j, "sigma", c.sigma);
    read(j, "delta", c.delta);
    read(j, "gamma", c.gamma);
    read(j, "lambda", c.lambda);
    read(j, "k", c.k);
    read(j, "c_max", c.c_max);
    read(j, "inspect_interval_s", c.inspect_interval);
    read(j, "collect_interval_s", c.collect_interval);
    read(j, "analysis_span_s", c.analysis_span);
    read(j, "cooldown_s", c.cooldown);
    read(j, "khpa_threshold", c.khpa_threshold);
    if (j.contains("ga")) {
      const auto& g = j.at("ga");
      read(g, "iterations", c.ga.iterations);
      read(g, "population", c.ga.population);
      read(g, "elites", c.ga.elites);
      read(g, "p_crossover", c.ga.p_crossover);
      read(g, "p_mutation", c.ga.p_mutation);
      read(g, "tournament", c.ga.tournament);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad controller config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const ControllerConfig& c) {
  return {{"slo_ms", c.slo},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"cl", c.cl},
          {"sigma", c.sigma},
          {"delta", c.delta},
          {"gamma", c.gamma},
          {"lambda", c.lambda},
          {"k", c.k},
          {"c_max", c.c_max},
          {"inspect_interval_s", c.inspect_interval},
          {"collect_interval_s", c.collect_interval},
          {"analysis_span_s", c.analysis_span},
          {"cooldown_s", c.cooldown},
          {"khpa_threshold", c.khpa_threshold},
          {"ga",
           {{"iterations", c.ga.iterations},
            {"population", c.ga.population},
            {"elites", c.ga.elites},
            {"p_crossover", c.ga.p_crossover},
            {"p_mutation", c.ga.p_mutation},
            {"tournament", c.ga.tournament}}}};
}

ControllerConfig config_for(const sim::Scenario& scenario) {
  ControllerConfig c;
  c.slo = scenario.slo;
  c.collect_interval = scenario.interval;
  if (scenario.document.is_object() && scenario.document.contains("controller")) {
    c = config_from_json(scenario.document.at("controller"), c);
  }
  c.validate();
  return c;
}

}  // namespace pbscale::controller
