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

#include "pbscale/metrics/service_graph.hpp"

#include <algorithm>
#include <deque>

#include "pbscale/error.hpp"

namespace pbscale::metrics {

ServiceId::ServiceId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw Error("service id must be non-empty");
  if (name_.find_first_of(",\n\r\"") != std::string::npos) {
    throw Error("service id '" + name_ + "' contains a reserved character");
  }
}

ServiceGraph::Index ServiceGraph::add_service(const ServiceId& id) {
  if (id.empty()) throw Error("service id must be non-empty");
  auto [it, inserted] = index_.emplace(id, ids_.size());
  if (!inserted) throw Error("duplicate service '" + id.str() + "'");
  ids_.push_back(id);
  out_.emplace_back();
  in_.emplace_back();
  return it->second;
}

void ServiceGraph::add_edge(const ServiceId& caller, const ServiceId& callee) {
  const Index a = index_of(caller);
  const Index b = index_of(callee);
  if (a == b) throw Error("self-loop on '" + caller.str() + "'");
  if (has_edge(a, b)) {
    throw Error("duplicate edge " + caller.str() + " -> " + callee.str());
  }
  out_[a].push_back(b);
  in_[b].push_back(a);
  edges_.push_back({a, b});
}

ServiceGraph::Index ServiceGraph::index_of(const ServiceId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown service '" + id.str() + "'");
  return it->second;
}

bool ServiceGraph::has_edge(Index caller, Index callee) const {
  const auto& out = out_.at(caller);
  return std::find(out.begin(), out.end(), callee) != out.end();
}

ServiceGraph ServiceGraph::induced_subgraph(std::span<const ServiceId> keep) const {
  std::vector<bool> selected(size(), false);
  for (const auto& id : keep) selected[index_of(id)] = true;

  ServiceGraph sub;
  for (Index i = 0; i < size(); ++i) {
    if (selected[i]) sub.add_service(ids_[i]);
  }
  for (const auto& e : edges_) {
    if (selected[e.caller] && selected[e.callee]) sub.add_edge(ids_[e.caller], ids_[e.callee]);
  }
  return sub;
}

std::optional<std::vector<ServiceGraph::Index>> ServiceGraph::topological_order() const {
  std::vector<std::size_t> indegree(size());
  for (const auto& e : edges_) ++indegree[e.callee];
  std::deque<Index> ready;
  for (Index i = 0; i < size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<Index> order;
  order.reserve(size());
  while (!ready.empty()) {
    const Index u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (Index v : out_[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  if (order.size() != size()) return std::nullopt;
  return order;
}

std::vector<std::optional<std::size_t>> hops_from(const ServiceGraph& graph,
                                                  ServiceGraph::Index source) {
  std::vector<std::optional<std::size_t>> dist(graph.size());
  std::deque<ServiceGraph::Index> frontier{source};
  dist.at(source) = 0;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop_front();
    for (auto v : graph.callees(u)) {
      if (!dist[v]) {
        dist[v] = *dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

std::optional<std::size_t> min_hops(const ServiceGraph& graph, const ServiceId& from,
                                    const ServiceId& to) {
  const auto target = graph.index_of(to);
  return hops_from(graph, graph.index_of(from))[target];
}

}  // namespace pbscale::metrics
