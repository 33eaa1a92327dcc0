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
#include <span>
#include <vector>

#include "pbscale/analysis/detection.hpp"

namespace pbscale::analysis {

/// Row-stochastic anomaly-tracking matrix over the nodes of an abnormal
/// subgraph. Entry (i, j) is the probability of following the anomaly from
/// caller i to callee j. Rows of nodes without callees are all zero and
/// flagged dangling.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::vector<ServiceId> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<ServiceId>& nodes() const noexcept { return nodes_; }
  double operator()(std::size_t i, std::size_t j) const { return p_[i * size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return p_[i * size() + j]; }
  bool dangling(std::size_t i) const { return dangling_.at(i); }
  void set_dangling(std::size_t i, bool value) { dangling_.at(i) = value; }

 private:
  std::vector<ServiceId> nodes_;
  std::vector<double> p_;
  std::vector<bool> dangling_;
};

/// Node-induced subgraph of `graph` over the abnormal services.
ServiceGraph extract_anomaly_subgraph(const ServiceGraph& graph, const AbnormalSet& abnormal);

/// Anomaly potential of every subgraph node: the sum over abnormal ancestors
/// j of m_j * exp(-d_ji / sigma), with d_ji the hop distance inside the
/// subgraph. Nodes without ancestors get 0. Aligned with subgraph order.
std::vector<double> topological_potential(const ServiceGraph& subgraph,
                                          const std::map<ServiceId, int>& degrees, double sigma);

/// Potentials divided by their sum; all-zero potentials give a uniform vector.
std::vector<double> normalize_preference(std::span<const double> potentials);

/// Transition probabilities from correlation: for each edge i -> j the raw
/// weight is max over j's metrics (workload, P90, CPU, memory) of
/// pearson(P90 of i, metric), negatives clamped to 0. Rows are normalized;
/// an all-zero row falls back to uniform over the callees.
TransitionMatrix build_transition_matrix(const ServiceGraph& subgraph, const MetricWindow& window,
                                         double span);

/// 1 / out-degree on every edge.
TransitionMatrix uniform_transition_matrix(const ServiceGraph& subgraph);

struct PageRankOptions {
  double delta = 0.15;  // restart probability
  double tol = 1e-6;    // L1 change between iterates
  int max_iter = 100;
};

struct PageRankResult {
  std::vector<double> scores;
  int iterations = 0;
  std::vector<double> l1_changes;  // one per iteration
};

/// Random walk with restart: v' = (1 - delta) * (walk(v) + dangling(v) * u)
/// + delta * u, where walk moves mass along the rows of P and dangling mass
/// restarts through u. Starts at u; output renormalized to sum 1.
PageRankResult personalized_pagerank(const TransitionMatrix& p, std::span<const double> u,
                                     const PageRankOptions& options = {});

struct RankedService {
  ServiceId id;
  double score = 0.0;
};

/// Descending by score; equal scores ordered by id.
struct RankingList {
  std::vector<RankedService> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
  std::vector<ServiceId> top(std::size_t k) const;
};

RankingList make_ranking(std::span<const ServiceId> nodes, std::span<const double> scores);

struct TopoRankOptions {
  double sigma = 1.0;
  double series_span = 60.0;  // s of latency/metric history used for correlation
  PageRankOptions pagerank;
};

/// Bottleneck localization over the abnormal services: potentials ->
/// preference vector -> correlation transitions -> personalized PageRank.
RankingList toporank(const ServiceGraph& graph, const MetricWindow& window,
                     const AbnormalSet& abnormal, const TopoRankOptions& options = {});

/// Ablation: uniform preference, same correlation-weighted transitions.
RankingList uniform_pagerank(const ServiceGraph& graph, const MetricWindow& window,
                             const AbnormalSet& abnormal, const TopoRankOptions& options = {});

}  // namespace pbscale::analysis
