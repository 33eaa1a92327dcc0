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

#include "pbscale/controller/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include "pbscale/controller/controller.hpp"
#include "pbscale/controller/khpa.hpp"
#include "pbscale/error.hpp"
#include "pbscale/metrics/trace_csv.hpp"
#include "pbscale/random.hpp"
#include "pbscale/sim/simulator.hpp"

namespace pbscale::controller {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::none:
      return "none";
    case Policy::khpa:
      return "khpa";
    case Policy::pbscale:
      return "pbscale";
  }
  return "none";
}

Policy parse_policy(std::string_view name) {
  if (name == "none") return Policy::none;
  if (name == "khpa") return Policy::khpa;
  if (name == "pbscale") return Policy::pbscale;
  throw Error("unknown policy '" + std::string(name) + "' (none, khpa, pbscale)");
}

double violation_rate(std::span<const double> latencies, double slo) {
  if (latencies.empty()) return 0.0;
  std::size_t n = 0;
  for (double l : latencies) n += l > slo ? 1 : 0;
  return 100.0 * static_cast<double>(n) / static_cast<double>(latencies.size());
}

std::vector<double> ExperimentReport::latencies() const {
  std::vector<double> out;
  out.reserve(ticks.size());
  for (const auto& t : ticks) out.push_back(t.entry_p90);
  return out;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["policy"] = std::string(to_string(policy));
  j["seed"] = seed;
  j["slo_ms"] = slo;
  j["interval_s"] = interval;
  j["ticks"] = ticks.size();
  j["violations"] = violations;
  j["violation_rate"] = violation_rate;
  j["cost"] = cost;
  double replica_ticks = 0.0;
  for (const auto& t : ticks) {
    for (int r : t.replicas) replica_ticks += r;
  }
  j["mean_replicas"] = ticks.empty() ? 0.0 : replica_ticks / static_cast<double>(ticks.size());
  auto& log = j["decisions"] = nlohmann::json::array();
  for (const auto& d : decisions) {
    nlohmann::json e;
    e["t"] = d.t;
    e["kind"] = d.kind;
    for (const auto& [key, list] : {std::pair{"abnormal", &d.abnormal},
                                    std::pair{"ranking", &d.ranking},
                                    std::pair{"targets", &d.targets}}) {
      auto& arr = e[key] = nlohmann::json::array();
      for (const auto& id : *list) arr.push_back(id.str());
    }
    e["changes"] = nlohmann::json::object();
    for (const auto& [id, n] : d.changes) e["changes"][id.str()] = n;
    if (!d.warning.empty()) e["warning"] = d.warning;
    log.push_back(std::move(e));
  }
  return j;
}

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "t,rps,entry_p90,violation,cpu,mem,cost";
  for (const auto& s : services) out << ",r_" << s.str();
  out << '\n';
  for (const auto& t : ticks) {
    const double c = (t.cpu * prices.cpu_price + t.mem * prices.mem_price) * interval;
    out << metrics::format_number(t.t) << ',' << metrics::format_number(t.rps) << ','
        << metrics::format_number(t.entry_p90) << ',' << (t.entry_p90 > slo ? 1 : 0) << ','
        << metrics::format_number(t.cpu) << ',' << metrics::format_number(t.mem) << ','
        << metrics::format_number(c);
    for (int r : t.replicas) out << ',' << r;
    out << '\n';
  }
}

predictor::Dataset default_dataset(const sim::Scenario& scenario, const ControllerConfig& config,
                                   std::uint64_t seed, const TrainingOptions& options) {
  const auto policy = predictor::alternate_policies(
      {predictor::random_policy(),
       predictor::jittered(khpa_policy(config.khpa_threshold, config.c_max))});
  return predictor::generate_dataset(scenario, options.episodes, policy, seed, options.dataset);
}

predictor::RandomForest train_default_model(const sim::Scenario& scenario,
                                            const ControllerConfig& config, std::uint64_t seed,
                                            const TrainingOptions& options) {
  const auto data = default_dataset(scenario, config, derive_seed(seed, {0}), options);
  return predictor::train_forest(data, options.forest, derive_seed(seed, {1}));
}

namespace {

struct Pending {
  double effective = 0.0;
  std::map<metrics::ServiceId, int> changes;
};

}  // namespace

ExperimentReport run_experiment(const sim::Scenario& scenario, Policy policy,
                                const sim::WorkloadTrace& trace, std::uint64_t seed,
                                const ExperimentOptions& options) {
  if (!scenario.model) throw Error("scenario has no cluster model");
  if (trace.values.empty()) throw Error("empty workload trace");
  if (std::abs(trace.tick - scenario.interval) > 1e-9) {
    throw Error("trace tick must equal the scenario collection interval");
  }
  const auto& config = options.config;
  config.validate();
  if (std::abs(config.collect_interval - scenario.interval) > 1e-9) {
    throw Error("controller collect interval differs from the scenario interval");
  }
  const auto& graph = scenario.model->graph();

  std::optional<predictor::RandomForest> trained;
  const predictor::RandomForest* model = options.model;
  std::optional<Controller> controller;
  if (policy == Policy::pbscale) {
    if (model == nullptr) {
      trained = train_default_model(scenario, config, derive_seed(seed, {2}), options.training);
      model = &*trained;
    }
    if (model->services() != graph.services()) {
      throw Error("predictor model was trained on a different service list");
    }
    controller.emplace(
        config,
        [model](std::span<const int> r, std::span<const double> w) { return model->predict(r, w); },
        derive_seed(seed, {3}));
  }

  ExperimentReport report;
  report.scenario = scenario.name;
  report.policy = policy;
  report.seed = seed;
  report.slo = config.slo;
  report.interval = scenario.interval;
  report.prices = options.prices;
  report.services = graph.services();

  auto state = scenario.initial_state();
  metrics::MetricWindow window(scenario.interval);
  std::vector<Pending> pending;
  const auto cadence =
      static_cast<std::size_t>(std::llround(config.inspect_interval / scenario.interval));
  std::vector<double> cpu, mem;

  for (std::size_t k = 0; k < trace.values.size(); ++k) {
    const double t = static_cast<double>(k) * scenario.interval;
    for (auto it = pending.begin(); it != pending.end();) {
      if (it->effective <= t + 1e-9) {
        state = sim::apply_scaling(state, it->changes);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }

    const auto res = sim::step(state, trace.values[k], t, seed);
    TickRecord rec;
    rec.t = t;
    rec.rps = trace.values[k];
    rec.entry_p90 = res.entry_latency;
    rec.replicas = state.replica_vector();
    for (const auto& [id, r] : res.snapshot.services) {
      rec.cpu += r.cpu_usage;
      rec.mem += r.mem_usage;
    }
    cpu.push_back(rec.cpu);
    mem.push_back(rec.mem);
    report.ticks.push_back(std::move(rec));
    window.append(res.snapshot);

    if (policy == Policy::none || (k + 1) % cadence != 0) continue;

    DecisionRecord d;
    d.t = t;
    std::map<metrics::ServiceId, int> changes;
    if (policy == Policy::khpa) {
      const auto next = khpa_tick(state, window, config.khpa_threshold, config.c_max,
                                  config.inspect_interval);
      for (std::size_t i = 0; i < report.services.size(); ++i) {
        if (next.replicas(i) != state.replicas(i)) changes[report.services[i]] = next.replicas(i);
      }
      d.kind = changes.empty() ? "none" : "khpa";
    } else {
      auto out = controller->tick(state, window, t);
      changes = out.action.changes;
      d.kind = std::string(to_string(out.action.kind));
      d.abnormal = out.action.abnormal;
      d.ranking = out.action.ranking.top(out.action.ranking.size());
      d.targets = out.action.targets;
      d.warning = out.action.warning;
    }
    if (changes.empty() && d.warning.empty()) continue;
    d.changes = changes;
    report.decisions.push_back(d);
    if (!changes.empty()) {
      pending.push_back({t + scenario.interval + scenario.startup_lag, std::move(changes)});
    }
  }

  const auto lat = report.latencies();
  report.violation_rate = violation_rate(lat, report.slo);
  report.violations = static_cast<int>(
      std::count_if(lat.begin(), lat.end(), [&](double l) { return l > report.slo; }));
  report.cost = cost(cpu, mem, scenario.interval, options.prices);
  return report;
}

ExperimentReport run_experiment(const sim::Scenario& scenario, Policy policy,
                                const sim::WorkloadTrace& trace, std::uint64_t seed) {
  ExperimentOptions options;
  options.config = config_for(scenario);
  return run_experiment(scenario, policy, trace, seed, options);
}

}  // namespace pbscale::controller
