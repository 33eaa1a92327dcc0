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

#include "pbscale/controller/controller.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pbscale/analysis/redundancy.hpp"
#include "pbscale/error.hpp"
#include "pbscale/metrics/stats.hpp"
#include "pbscale/optimizer/decision.hpp"
#include "pbscale/random.hpp"

namespace pbscale::controller {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::none:
      return "none";
    case ActionKind::scale_up:
      return "scale-up";
    case ActionKind::scale_down:
      return "scale-down";
  }
  return "none";
}

analysis::AbnormalSet inspect(const metrics::ServiceGraph& graph,
                              const metrics::MetricWindow& window,
                              const ControllerConfig& config) {
  const auto recent = window.trailing(config.inspect_interval);
  auto now = analysis::detect_slo_violations(graph, recent, config.slo, config.alpha);
  if (now.empty()) return now;
  const double span = std::min(config.analysis_span, window.duration());
  const auto longer =
      analysis::detect_slo_violations(graph, window.trailing(span), config.slo, config.alpha);
  for (auto& [id, count] : now.violation_counts) count = std::max(count, longer.count(id));
  return now;
}

Controller::Controller(ControllerConfig config, optimizer::Predictor predictor, std::uint64_t seed)
    : config_(std::move(config)), predictor_(std::move(predictor)), seed_(seed) {
  config_.validate();
  if (!predictor_) throw Error("controller needs a predictor");
}

bool Controller::cooling(const ServiceId& id, double t) const {
  const auto it = last_scaled_.find(id);
  return it != last_scaled_.end() && t - it->second < config_.cooldown - 1e-9;
}

Action Controller::plan(const sim::ClusterState& state, const metrics::MetricWindow& window,
                        double t) {
  Action action;
  action.time = t;
  if (window.duration() + 1e-9 < config_.inspect_interval) {
    action.warning = "not enough history";
    return action;
  }
  const auto& model = state.model();
  const auto& graph = model.graph();
  const auto& services = graph.services();
  const auto& current = state.replica_vector();
  std::vector<double> workloads;
  for (const auto& id : services) {
    workloads.push_back(
        metrics::mean(window.query(id, metrics::MetricKind::workload, config_.inspect_interval)));
  }

  const auto abnormal = inspect(graph, window, config_);
  auto params = config_.decision_params();
  params.ga.seed = derive_seed(seed_, {std::bit_cast<std::uint64_t>(t)});

  if (!abnormal.empty()) {
    action.abnormal = abnormal.services();
    action.ranking = analysis::toporank(graph, window, abnormal, config_.toporank_options());
    std::vector<ServiceId> candidates;
    for (const auto& e : action.ranking.entries) {
      if (!cooling(e.id, t)) candidates.push_back(e.id);
    }
    if (candidates.empty()) {
      action.warning = "bottlenecks cooling down";
      return action;
    }
    const auto d = optimizer::decide(candidates, optimizer::Direction::scale_up, services,
                                     current, workloads, predictor_, params);
    action.kind = ActionKind::scale_up;
    action.targets = d.targets;
    action.changes = d.changes(services, current);
    return action;
  }

  std::vector<ServiceId> eligible;
  for (std::size_t i = 0; i < services.size(); ++i) {
    if (current[i] > 1 && !cooling(services[i], t)) eligible.push_back(services[i]);
  }
  if (eligible.empty()) return action;
  for (const auto& r : analysis::redundancy_check(window, eligible, config_.redundancy_options(), sized_for_)) {
    action.redundant.push_back(r.id);
  }
  if (action.redundant.empty()) return action;
  const auto d = optimizer::decide(action.redundant, optimizer::Direction::scale_down, services,
                                   current, workloads, predictor_, params);
  std::vector<int> proposal;
  for (const auto& id : services) proposal.push_back(d.replicas.at(id));
  if (predictor_(proposal, workloads) != 1) {
    action.warning = "no scale-down predicted to meet the SLO";
    return action;
  }
  action.kind = ActionKind::scale_down;
  action.targets = d.targets;
  action.changes = d.changes(services, current);
  return action;
}

TickResult Controller::tick(const sim::ClusterState& state, const metrics::MetricWindow& window,
                            double t) {
  Action action;
  try {
    action = plan(state, window, t);
  } catch (const std::exception& e) {
    action = Action{};
    action.time = t;
    action.warning = e.what();
  }
  if (action.changes.empty()) {
    if (action.kind != ActionKind::none && action.warning.empty()) {
      action.warning = "optimizer kept the current replicas";
    }
    return {std::move(action), state};
  }
  for (const auto& [id, n] : action.changes) {
    last_scaled_[id] = t;
    sized_for_[id] = window.query(id, metrics::MetricKind::workload,
                                 std::min(config_.analysis_span, window.duration()));
  }
  return {action, sim::apply_scaling(state, action.changes)};
}

}  // namespace pbscale::controller
