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

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pbscale::metrics {

/// Name of a microservice. Never empty; comparable so it can key ordered maps.
class ServiceId {
 public:
  ServiceId() = default;
  explicit ServiceId(std::string name);
  ServiceId(const char* name) : ServiceId(std::string(name)) {}  // NOLINT

  const std::string& str() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  friend auto operator<=>(const ServiceId&, const ServiceId&) = default;
  friend bool operator==(const ServiceId&, const ServiceId&) = default;

 private:
  std::string name_;
};

using EdgeKey = std::pair<ServiceId, ServiceId>;  // (caller, callee)

/// Directed invocation graph. Nodes keep their insertion order, which is the
/// canonical service ordering used for feature vectors and matrices.
class ServiceGraph {
 public:
  using Index = std::size_t;

  struct Edge {
    Index caller;
    Index callee;
  };

  Index add_service(const ServiceId& id);
  void add_edge(const ServiceId& caller, const ServiceId& callee);

  std::size_t size() const noexcept { return ids_.size(); }
  bool contains(const ServiceId& id) const { return index_.contains(id); }
  Index index_of(const ServiceId& id) const;
  const ServiceId& id(Index i) const { return ids_.at(i); }
  const std::vector<ServiceId>& services() const noexcept { return ids_; }

  std::span<const Index> callees(Index i) const { return out_.at(i); }
  std::span<const Index> callers(Index i) const { return in_.at(i); }
  bool has_edge(Index caller, Index callee) const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Node-induced subgraph; nodes keep the parent's relative order.
  ServiceGraph induced_subgraph(std::span<const ServiceId> keep) const;

  /// Nodes in an order where every caller precedes its callees, or nullopt
  /// when the graph has a cycle.
  std::optional<std::vector<Index>> topological_order() const;

 private:
  std::vector<ServiceId> ids_;
  std::map<ServiceId, Index> index_;
  std::vector<std::vector<Index>> out_;
  std::vector<std::vector<Index>> in_;
  std::vector<Edge> edges_;
};

/// Length of the shortest directed path from `from` to `to` following the
/// invocation direction; nullopt when unreachable. Terminates on cyclic graphs.
std::optional<std::size_t> min_hops(const ServiceGraph& graph, const ServiceId& from,
                                    const ServiceId& to);

/// BFS distances from one source to every node (nullopt = unreachable).
std::vector<std::optional<std::size_t>> hops_from(const ServiceGraph& graph,
                                                  ServiceGraph::Index source);

}  // namespace pbscale::metrics

template <>
struct std::hash<pbscale::metrics::ServiceId> {
  std::size_t operator()(const pbscale::metrics::ServiceId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
