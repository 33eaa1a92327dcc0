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

#include "pbscale/sim/cluster.hpp"

#include <string>

#include "pbscale/error.hpp"

namespace pbscale::sim {

void validate(const ServiceSpec& spec) {
  const std::string who = spec.id.str();
  if (spec.id.empty()) throw Error("service spec without id");
  if (!(spec.base_service_time > 0.0)) throw Error(who + ": base_service_time must be > 0");
  if (!(spec.capacity_per_replica > 0.0)) throw Error(who + ": capacity_per_replica must be > 0");
  if (!(spec.cpu_per_replica >= 0.0)) throw Error(who + ": cpu_per_replica must be >= 0");
  if (!(spec.mem_per_replica >= 0.0)) throw Error(who + ": mem_per_replica must be >= 0");
  if (spec.max_replicas < 1) throw Error(who + ": max_replicas must be >= 1");
  if (spec.initial_replicas < 1 || spec.initial_replicas > spec.max_replicas) {
    throw Error(who + ": initial_replicas outside [1, max_replicas]");
  }
}

FaultKind parse_fault_kind(std::string_view name) {
  if (name == "cpu-overload") return FaultKind::cpu_overload;
  if (name == "memory-overflow") return FaultKind::memory_overflow;
  if (name == "network-congestion") return FaultKind::network_congestion;
  throw Error("unknown fault kind '" + std::string(name) + "'");
}

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::cpu_overload: return "cpu-overload";
    case FaultKind::memory_overflow: return "memory-overflow";
    case FaultKind::network_congestion: return "network-congestion";
  }
  return "?";
}

void validate(const FaultInjection& fault) {
  if (!(fault.start < fault.end)) throw Error("fault window must satisfy start < end");
  if (!(fault.severity > 1.0)) throw Error("fault severity must be > 1");
}

Composition parse_composition(std::string_view name) {
  if (name == "critical-path") return Composition::critical_path;
  if (name == "sum") return Composition::sum;
  throw Error("unknown latency composition '" + std::string(name) + "'");
}

std::string_view to_string(Composition composition) {
  return composition == Composition::sum ? "sum" : "critical-path";
}

ClusterModel::ClusterModel(ServiceGraph graph, std::vector<ServiceSpec> specs,
                           std::map<EdgeKey, double> fanout, ServiceId entry,
                           SimOptions options)
    : graph_(std::move(graph)), fanout_(std::move(fanout)), entry_(std::move(entry)),
      options_(options) {
  if (graph_.size() == 0) throw Error("cluster model needs at least one service");
  if (specs.size() != graph_.size()) throw Error("one service spec per graph node required");
  specs_.resize(graph_.size());
  std::vector<bool> seen(graph_.size(), false);
  for (auto& s : specs) {
    validate(s);
    const auto i = graph_.index_of(s.id);
    if (seen[i]) throw Error("duplicate spec for '" + s.id.str() + "'");
    seen[i] = true;
    specs_[i] = std::move(s);
  }
  entry_index_ = graph_.index_of(entry_);
  if (!(options_.k_sat > 0.0)) throw Error("k_sat must be positive");
  if (!(options_.epsilon > 0.0 && options_.epsilon < 1.0)) throw Error("epsilon must be in (0,1)");
  if (!(options_.noise >= 0.0 && options_.noise < 1.0)) throw Error("noise must be in [0,1)");

  for (const auto& [edge, w] : fanout_) {
    const auto a = graph_.index_of(edge.first);
    const auto b = graph_.index_of(edge.second);
    if (!graph_.has_edge(a, b)) {
      throw Error("fan-out given for missing edge " + edge.first.str() + " -> " +
                  edge.second.str());
    }
    if (!(w >= 0.0)) throw Error("fan-out weights must be non-negative");
  }
  fanout_by_index_.resize(graph_.size());
  for (ServiceGraph::Index i = 0; i < graph_.size(); ++i) {
    for (auto j : graph_.callees(i)) {
      auto it = fanout_.find({graph_.id(i), graph_.id(j)});
      const double w = it == fanout_.end() ? 1.0 : it->second;
      fanout_by_index_[i].push_back(w);
      fanout_[{graph_.id(i), graph_.id(j)}] = w;
    }
  }
  auto order = graph_.topological_order();
  if (!order) throw Error("call graph has a cycle; demand routing needs a DAG");
  topo_ = std::move(*order);
}

double ClusterModel::fanout(ServiceGraph::Index caller, ServiceGraph::Index callee) const {
  const auto callees = graph_.callees(caller);
  for (std::size_t k = 0; k < callees.size(); ++k) {
    if (callees[k] == callee) return fanout_by_index_[caller][k];
  }
  throw Error("no edge " + graph_.id(caller).str() + " -> " + graph_.id(callee).str());
}

ClusterState::ClusterState(std::shared_ptr<const ClusterModel> model) : model_(std::move(model)) {
  if (!model_) throw Error("cluster state needs a model");
  replicas_.reserve(model_->size());
  for (const auto& s : model_->specs()) replicas_.push_back(s.initial_replicas);
}

void ClusterState::set_replicas(const ServiceId& id, int count) {
  const auto i = model_->graph().index_of(id);
  const int max = model_->spec(i).max_replicas;
  if (count < 1 || count > max) {
    throw Error(id.str() + ": replica count " + std::to_string(count) + " outside [1, " +
                std::to_string(max) + "]");
  }
  replicas_[i] = count;
}

void ClusterState::add_fault(FaultInjection fault) {
  validate(fault);
  model_->graph().index_of(fault.target);
  faults_.push_back(std::move(fault));
}

ClusterState apply_scaling(const ClusterState& state, const std::map<ServiceId, int>& strategy) {
  ClusterState next = state;
  for (const auto& [id, count] : strategy) next.set_replicas(id, count);
  return next;
}

ClusterState inject_fault(const ClusterState& state, const FaultInjection& fault) {
  ClusterState next = state;
  next.add_fault(fault);
  return next;
}

}  // namespace pbscale::sim
