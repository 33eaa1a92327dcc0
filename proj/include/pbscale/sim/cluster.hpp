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

#include <map>
#include <memory>
#include <string_view>
#include <vector>

#include "pbscale/metrics/service_graph.hpp"

namespace pbscale::sim {

using metrics::EdgeKey;
using metrics::ServiceGraph;
using metrics::ServiceId;

struct ServiceSpec {
  ServiceId id;
  double base_service_time = 10.0;     // ms
  double capacity_per_replica = 100.0; // requests/s one replica sustains
  double cpu_per_replica = 0.5;        // vCPU at full utilization
  double mem_per_replica = 0.25;       // GB
  int max_replicas = 8;
  int initial_replicas = 1;
};

void validate(const ServiceSpec& spec);

enum class FaultKind { cpu_overload, memory_overflow, network_congestion };

FaultKind parse_fault_kind(std::string_view name);
std::string_view to_string(FaultKind kind);

struct FaultInjection {
  ServiceId target;
  FaultKind kind = FaultKind::cpu_overload;
  double start = 0.0;  // s, inclusive
  double end = 0.0;    // s, exclusive
  double severity = 2.0;

  bool active_at(double t) const noexcept { return t >= start && t < end; }
  friend bool operator==(const FaultInjection&, const FaultInjection&) = default;
};

void validate(const FaultInjection& fault);

enum class Composition { critical_path, sum };

Composition parse_composition(std::string_view name);
std::string_view to_string(Composition composition);

struct SimOptions {
  double k_sat = 10.0;    // saturation latency multiplier
  double epsilon = 1e-3;  // guards the 1 / (1 - rho) pole
  double noise = 0.05;    // +- multiplicative latency noise
  Composition composition = Composition::critical_path;
};

/// Immutable application description: topology, per-service specs, the
/// per-edge fan-out weights used to route demand, and the entry service.
/// The call graph must be acyclic so demand routing terminates.
class ClusterModel {
 public:
  ClusterModel(ServiceGraph graph, std::vector<ServiceSpec> specs,
               std::map<EdgeKey, double> fanout, ServiceId entry, SimOptions options = {});

  const ServiceGraph& graph() const noexcept { return graph_; }
  const std::vector<ServiceSpec>& specs() const noexcept { return specs_; }
  const ServiceSpec& spec(ServiceGraph::Index i) const { return specs_.at(i); }
  const ServiceSpec& spec(const ServiceId& id) const { return specs_.at(graph_.index_of(id)); }
  double fanout(ServiceGraph::Index caller, ServiceGraph::Index callee) const;
  const std::map<EdgeKey, double>& fanouts() const noexcept { return fanout_; }
  const ServiceId& entry() const noexcept { return entry_; }
  ServiceGraph::Index entry_index() const noexcept { return entry_index_; }
  const SimOptions& options() const noexcept { return options_; }
  const std::vector<ServiceGraph::Index>& topo_order() const noexcept { return topo_; }
  std::size_t size() const noexcept { return specs_.size(); }

 private:
  ServiceGraph graph_;
  std::vector<ServiceSpec> specs_;  // aligned with graph node order
  std::map<EdgeKey, double> fanout_;
  std::vector<std::vector<double>> fanout_by_index_;  // aligned with graph.callees(i)
  ServiceId entry_;
  ServiceGraph::Index entry_index_ = 0;
  SimOptions options_;
  std::vector<ServiceGraph::Index> topo_;
};

/// Replica vector plus active faults over a shared model. A plain value:
/// copying it is how what-if states are made.
class ClusterState {
 public:
  explicit ClusterState(std::shared_ptr<const ClusterModel> model);

  const ClusterModel& model() const noexcept { return *model_; }
  const std::shared_ptr<const ClusterModel>& model_ptr() const noexcept { return model_; }

  int replicas(const ServiceId& id) const { return replicas_.at(model_->graph().index_of(id)); }
  int replicas(ServiceGraph::Index i) const { return replicas_.at(i); }
  const std::vector<int>& replica_vector() const noexcept { return replicas_; }
  const std::vector<FaultInjection>& faults() const noexcept { return faults_; }

  /// Sets one count; throws outside [1, max_replicas].
  void set_replicas(const ServiceId& id, int count);
  void add_fault(FaultInjection fault);
  void clear_faults() { faults_.clear(); }

  friend bool operator==(const ClusterState& a, const ClusterState& b) {
    return a.model_ == b.model_ && a.replicas_ == b.replicas_ && a.faults_ == b.faults_;
  }

 private:
  std::shared_ptr<const ClusterModel> model_;
  std::vector<int> replicas_;
  std::vector<FaultInjection> faults_;
};

/// New state with the listed counts applied; unlisted services keep theirs.
/// The whole strategy is rejected if any count is out of range.
ClusterState apply_scaling(const ClusterState& state, const std::map<ServiceId, int>& strategy);

ClusterState inject_fault(const ClusterState& state, const FaultInjection& fault);

}  // namespace pbscale::sim
