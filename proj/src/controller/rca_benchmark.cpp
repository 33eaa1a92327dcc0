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

#include "pbscale/controller/rca_benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <iterator>
#include <memory>
#include <random>

#include "pbscale/analysis/detection.hpp"
#include "pbscale/controller/controller.hpp"
#include "pbscale/error.hpp"
#include "pbscale/random.hpp"
#include "pbscale/sim/simulator.hpp"

namespace pbscale::controller {

std::vector<RcaOutcome> RcaSummary::outcomes(bool ablation) const {
  std::vector<RcaOutcome> out;
  for (const auto& c : cases) {
    const auto& ranking = ablation ? c.ablation : c.toporank;
    out.push_back({ranking.top(ranking.size()), {c.target}});
  }
  return out;
}

nlohmann::json RcaSummary::to_json() const {
  nlohmann::json j;
  j["cases"] = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json e;
    e["target"] = c.target.str();
    e["fault"] = std::string(sim::to_string(c.kind));
    e["severity"] = c.severity;
    e["detected_at"] = c.detected_at;
    e["abnormal"] = nlohmann::json::array();
    for (const auto& id : c.abnormal) e["abnormal"].push_back(id.str());
    for (const auto* name : {"toporank", "ablation"}) {
      const auto& r = std::string(name) == "toporank" ? c.toporank : c.ablation;
      auto& list = e[name] = nlohmann::json::array();
      for (const auto& entry : r.entries) list.push_back({entry.id.str(), entry.score});
    }
    j["cases"].push_back(std::move(e));
  }
  j["toporank"] = {{"ac@1", ac1}, {"avg@5", avg5}};
  j["ablation"] = {{"ac@1", ablation_ac1}, {"avg@5", ablation_avg5}};
  j["methodology"] =
      "AC@k averages |top-k ∩ truth| / min(k, |truth|) over cases; Avg@k is the mean of AC@j "
      "for j = 1..k. The ablation uses a uniform preference vector over the same transitions.";
  return j;
}

double calibrate_severity(const sim::ClusterState& state, const metrics::ServiceId& target,
                          sim::FaultKind kind, double rps, double threshold, double margin) {
  static constexpr double kLadder[] = {1.25, 1.5, 2.0,  3.0,  4.0,  6.0,  8.0,  12.0,
                                       16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0};
  const auto& m = state.model();
  auto opts = m.options();
  opts.noise = 0.0;
  auto quiet = std::make_shared<const sim::ClusterModel>(m.graph(), m.specs(), m.fanouts(),
                                                         m.entry(), opts);
  const auto i = quiet->graph().index_of(target);
  std::map<metrics::ServiceId, int> replicas;
  for (std::size_t j = 0; j < m.size(); ++j) replicas[m.graph().id(j)] = state.replicas(j);
  for (double s : kLadder) {
    auto probe = sim::apply_scaling(sim::ClusterState(quiet), replicas);
    probe.add_fault({target, kind, 0.0, 1.0, s});
    const auto res = sim::step(probe, rps, 0.0, 0);
    if (res.details[i].inbound_latency >= margin * threshold) return s;
  }
  return kLadder[std::size(kLadder) - 1];
}

RcaSummary rca_benchmark(const sim::Scenario& scenario, const ControllerConfig& config,
                         std::uint64_t seed, const RcaOptions& options) {
  if (!scenario.model) throw Error("scenario has no cluster model");
  if (options.cases_per_kind < 1) throw Error("cases_per_kind must be >= 1");
  if (!(options.min_rps > 0.0 && options.max_rps >= options.min_rps)) {
    throw Error("invalid background load range");
  }
  if (!(options.jitter >= 0.0 && options.jitter < 1.0)) throw Error("jitter must be in [0, 1)");
  if (!(options.delay >= 0.0 && options.delay < options.horizon)) {
    throw Error("localization delay must be in [0, horizon)");
  }
  if (!(options.onset >= config.analysis_span)) {
    throw Error("fault onset must leave a full analysis span of healthy history");
  }
  config.validate();
  static constexpr sim::FaultKind kKinds[] = {sim::FaultKind::cpu_overload,
                                              sim::FaultKind::memory_overflow,
                                              sim::FaultKind::network_congestion};
  const auto& graph = scenario.model->graph();
  const auto& services = graph.services();
  const double threshold = analysis::detection_threshold(config.slo, config.alpha);
  const auto cadence =
      static_cast<std::size_t>(std::llround(config.inspect_interval / scenario.interval));
  const auto steps = static_cast<std::size_t>(
      std::llround((options.onset + options.horizon) / scenario.interval));

  RcaSummary summary;
  int n = 0;
  for (auto kind : kKinds) {
    for (int c = 0; c < options.cases_per_kind; ++c, ++n) {
      const auto case_seed = derive_seed(seed, {static_cast<std::uint64_t>(n)});
      RcaCase rc;
      rc.target = services[static_cast<std::size_t>(c) % services.size()];
      rc.kind = kind;
      std::mt19937_64 rng(case_seed);
      const double rps_mean =
          std::uniform_real_distribution<double>(options.min_rps, options.max_rps)(rng);
      auto state = scenario.initial_state();
      state.clear_faults();
      if (options.max_util > 0.0) {
        sim::ClusterState probe(scenario.model);
        const auto demand = sim::step(probe, rps_mean, 0.0, case_seed).details;
        std::uniform_real_distribution<double> util(options.min_util, options.max_util);
        std::map<metrics::ServiceId, int> sizing;
        for (std::size_t i = 0; i < services.size(); ++i) {
          const auto& spec = scenario.model->spec(i);
          const double want = std::ceil(demand[i].demand / (spec.capacity_per_replica * util(rng)));
          sizing[services[i]] = static_cast<int>(
              std::clamp(want, 1.0, static_cast<double>(spec.max_replicas)));
        }
        state = sim::apply_scaling(state, sizing);
      }
      rc.severity =
          calibrate_severity(state, rc.target, kind, rps_mean, threshold, options.margin);
      state.add_fault({rc.target, kind, options.onset, options.onset + options.horizon + 1.0,
                       rc.severity});
      std::uniform_real_distribution<double> jitter(-options.jitter, options.jitter);
      metrics::MetricWindow window(scenario.interval);
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * scenario.interval;
        const double rps = rps_mean * (1.0 + jitter(rng));
        window.append(sim::step(state, rps, t, case_seed).snapshot);
        if ((k + 1) % cadence != 0 || t + 1e-9 < options.onset + options.delay) continue;
        const auto abnormal = inspect(graph, window, config);
        if (abnormal.empty()) continue;
        rc.detected_at = t;
        rc.abnormal = abnormal.services();
        rc.toporank = analysis::toporank(graph, window, abnormal, config.toporank_options());
        rc.ablation = analysis::uniform_pagerank(graph, window, abnormal, config.toporank_options());
        break;
      }
      summary.cases.push_back(std::move(rc));
    }
  }
  const auto topo = summary.outcomes(false);
  const auto abl = summary.outcomes(true);
  summary.ac1 = ac_at_k(topo, 1);
  summary.avg5 = avg_at_k(topo, 5);
  summary.ablation_ac1 = ac_at_k(abl, 1);
  summary.ablation_avg5 = avg_at_k(abl, 5);
  return summary;
}

}  // namespace pbscale::controller
