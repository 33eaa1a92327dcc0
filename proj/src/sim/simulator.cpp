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

#include "pbscale/sim/simulator.hpp"

#include <algorithm>
#include <bit>

#include "pbscale/error.hpp"
#include "pbscale/random.hpp"

namespace pbscale::sim {

double queueing_latency(double service_time, double rho, const SimOptions& options) {
  const double queueing = 1.0 / std::max(options.epsilon, 1.0 - rho);
  const double saturated = options.k_sat * (1.0 + rho);
  return service_time * std::min(queueing, saturated);
}

StepResult step(const ClusterState& state, double rps_in, double t, std::uint64_t seed) {
  if (!(rps_in >= 0.0)) throw Error("entry workload must be non-negative");
  const ClusterModel& model = state.model();
  const ServiceGraph& graph = model.graph();
  const SimOptions& opt = model.options();
  const std::size_t n = model.size();

  std::vector<double> cpu_mult(n, 1.0), cap_div(n, 1.0), net_mult(n, 1.0);
  for (const auto& f : state.faults()) {
    if (!f.active_at(t)) continue;
    const auto i = graph.index_of(f.target);
    switch (f.kind) {
      case FaultKind::cpu_overload: cpu_mult[i] *= f.severity; break;
      case FaultKind::memory_overflow: cap_div[i] *= f.severity; break;
      case FaultKind::network_congestion: net_mult[i] *= f.severity; break;
    }
  }

  StepResult out;
  out.details.resize(n);
  auto& d = out.details;
  d[model.entry_index()].demand = rps_in;
  for (auto u : model.topo_order()) {
    for (auto v : graph.callees(u)) d[v].demand += d[u].demand * model.fanout(u, v);
  }

  const auto t_bits = std::bit_cast<std::uint64_t>(t);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& spec = model.spec(i);
    const double capacity = spec.capacity_per_replica / cap_div[i];
    d[i].utilization = d[i].demand / (static_cast<double>(state.replicas(i)) * capacity);
    const double latency = queueing_latency(spec.base_service_time * cpu_mult[i],
                                            d[i].utilization, opt);
    const double u = unit_interval(derive_seed(seed, {t_bits, i}));
    d[i].own_latency = latency * (1.0 + opt.noise * (2.0 * u - 1.0));
  }

  const auto& topo = model.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const auto s = *it;
    double downstream = 0.0;
    for (auto c : graph.callees(s)) {
      const double edge = d[c].inbound_latency;
      downstream = opt.composition == Composition::sum ? downstream + edge
                                                       : std::max(downstream, edge);
    }
    d[s].e2e_latency = d[s].own_latency + downstream;
    d[s].inbound_latency = d[s].e2e_latency * net_mult[s];
  }

  auto& snap = out.snapshot;
  snap.timestamp = t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& spec = model.spec(i);
    const double replicas = static_cast<double>(state.replicas(i));
    metrics::ServiceRecord rec;
    rec.workload = d[i].demand;
    rec.p90_latency = d[i].inbound_latency;
    rec.cpu_usage = replicas * spec.cpu_per_replica * std::min(d[i].utilization, 1.0);
    rec.mem_usage = replicas * spec.mem_per_replica;
    rec.replicas = state.replicas(i);
    snap.services.emplace(spec.id, rec);
  }
  for (const auto& e : graph.edges()) {
    snap.edge_p90[{graph.id(e.caller), graph.id(e.callee)}] = d[e.callee].inbound_latency;
  }
  out.entry_latency = d[model.entry_index()].inbound_latency;
  return out;
}

}  // namespace pbscale::sim
