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

#include "pbscale/analysis/toporank.hpp"

#include <algorithm>
#include <cmath>

#include "pbscale/error.hpp"
#include "pbscale/metrics/stats.hpp"

namespace pbscale::analysis {

using metrics::MetricKind;

TransitionMatrix::TransitionMatrix(std::vector<ServiceId> nodes)
    : nodes_(std::move(nodes)),
      p_(nodes_.size() * nodes_.size(), 0.0),
      dangling_(nodes_.size(), false) {}

ServiceGraph extract_anomaly_subgraph(const ServiceGraph& graph, const AbnormalSet& abnormal) {
  const auto ids = abnormal.services();
  return graph.induced_subgraph(ids);
}

std::vector<double> topological_potential(const ServiceGraph& subgraph,
                                          const std::map<ServiceId, int>& degrees, double sigma) {
  if (!(sigma > 0.0)) throw Error("sigma must be positive");
  const std::size_t n = subgraph.size();
  std::vector<double> phi(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    auto it = degrees.find(subgraph.id(j));
    const double m = it == degrees.end() ? 0.0 : static_cast<double>(it->second);
    if (m == 0.0) continue;
    const auto dist = metrics::hops_from(subgraph, j);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || !dist[i]) continue;
      phi[i] += m * std::exp(-static_cast<double>(*dist[i]) / sigma);
    }
  }
  return phi;
}

std::vector<double> normalize_preference(std::span<const double> potentials) {
  std::vector<double> u(potentials.begin(), potentials.end());
  if (u.empty()) return u;
  double sum = 0.0;
  for (double x : u) {
    if (!(x >= 0.0)) throw Error("potentials must be non-negative");
    sum += x;
  }
  if (sum == 0.0) {
    std::fill(u.begin(), u.end(), 1.0 / static_cast<double>(u.size()));
  } else {
    for (double& x : u) x /= sum;
  }
  return u;
}

namespace {

void normalize_rows(TransitionMatrix& p, const ServiceGraph& subgraph) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto callees = subgraph.callees(i);
    if (callees.empty()) {
      p.set_dangling(i, true);
      continue;
    }
    double sum = 0.0;
    for (auto j : callees) sum += p(i, j);
    for (auto j : callees) {
      p(i, j) = sum > 0.0 ? p(i, j) / sum : 1.0 / static_cast<double>(callees.size());
    }
  }
}

}  // namespace

TransitionMatrix build_transition_matrix(const ServiceGraph& subgraph, const MetricWindow& window,
                                         double span) {
  TransitionMatrix p(subgraph.services());
  span = std::min(span, window.duration());
  if (window.size() >= 2 && span >= 2.0 * window.interval()) {
    static constexpr MetricKind kMetricSet[] = {MetricKind::workload, MetricKind::p90_latency,
                                                MetricKind::cpu, MetricKind::mem};
    for (std::size_t i = 0; i < subgraph.size(); ++i) {
      const auto latency = window.query(subgraph.id(i), MetricKind::p90_latency, span);
      for (auto j : subgraph.callees(i)) {
        double best = 0.0;
        for (auto kind : kMetricSet) {
          const auto m = window.query(subgraph.id(j), kind, span);
          best = std::max(best, metrics::pearson(latency, m));
        }
        p(i, j) = best;
      }
    }
  }
  normalize_rows(p, subgraph);
  return p;
}

TransitionMatrix uniform_transition_matrix(const ServiceGraph& subgraph) {
  TransitionMatrix p(subgraph.services());
  normalize_rows(p, subgraph);
  return p;
}

PageRankResult personalized_pagerank(const TransitionMatrix& p, std::span<const double> u,
                                     const PageRankOptions& options) {
  const std::size_t n = p.size();
  if (u.size() != n) throw Error("preference vector size does not match the matrix");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw Error("delta must be in (0, 1)");
  double usum = 0.0;
  for (double x : u) {
    if (!(x >= 0.0)) throw Error("preference vector must be non-negative");
    usum += x;
  }
  if (n > 0 && std::abs(usum - 1.0) > 1e-9) throw Error("preference vector must sum to 1");

  PageRankResult result;
  std::vector<double> v(u.begin(), u.end());
  std::vector<double> next(n);
  const double walk = 1.0 - options.delta;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    double dangling_mass = 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.dangling(i)) {
        dangling_mass += v[i];
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) next[j] += v[i] * p(i, j);
    }
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] = walk * (next[j] + dangling_mass * u[j]) + options.delta * u[j];
      change += std::abs(next[j] - v[j]);
    }
    v.swap(next);
    result.iterations = iter + 1;
    result.l1_changes.push_back(change);
    if (change < options.tol) break;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  }
  result.scores = std::move(v);
  return result;
}

std::vector<ServiceId> RankingList::top(std::size_t k) const {
  std::vector<ServiceId> out;
  for (std::size_t i = 0; i < std::min(k, entries.size()); ++i) out.push_back(entries[i].id);
  return out;
}

RankingList make_ranking(std::span<const ServiceId> nodes, std::span<const double> scores) {
  if (nodes.size() != scores.size()) throw Error("ranking: nodes and scores differ in length");
  RankingList list;
  for (std::size_t i = 0; i < nodes.size(); ++i) list.entries.push_back({nodes[i], scores[i]});
  std::sort(list.entries.begin(), list.entries.end(),
            [](const RankedService& a, const RankedService& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
  return list;
}

RankingList toporank(const ServiceGraph& graph, const MetricWindow& window,
                     const AbnormalSet& abnormal, const TopoRankOptions& options) {
  if (abnormal.empty()) throw Error("toporank needs at least one abnormal service");
  const ServiceGraph sub = extract_anomaly_subgraph(graph, abnormal);
  const auto phi = topological_potential(sub, abnormal.violation_counts, options.sigma);
  const auto u = normalize_preference(phi);
  const auto p = build_transition_matrix(sub, window, options.series_span);
  const auto pr = personalized_pagerank(p, u, options.pagerank);
  return make_ranking(sub.services(), pr.scores);
}

RankingList uniform_pagerank(const ServiceGraph& graph, const MetricWindow& window,
                             const AbnormalSet& abnormal, const TopoRankOptions& options) {
  if (abnormal.empty()) throw Error("ranking needs at least one abnormal service");
  const ServiceGraph sub = extract_anomaly_subgraph(graph, abnormal);
  const std::vector<double> u(sub.size(), 1.0 / static_cast<double>(sub.size()));
  const auto p = build_transition_matrix(sub, window, options.series_span);
  const auto pr = personalized_pagerank(p, u, options.pagerank);
  return make_ranking(sub.services(), pr.scores);
}

}  // namespace pbscale::analysis
