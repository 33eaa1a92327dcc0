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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "pbscale/error.hpp"
#include "pbscale/metrics/metric_window.hpp"
#include "pbscale/metrics/service_graph.hpp"
#include "pbscale/metrics/stats.hpp"
#include "pbscale/metrics/trace_csv.hpp"

using namespace pbscale;
using namespace pbscale::metrics;
using pbscale::testing::Gen;

namespace {

// Reference values computed offline with numpy (percentile, inverted_cdf)
// and scipy.stats.pearsonr.
const std::vector<double> kLatencies = {412.5, 388.1, 501.7, 455.0, 399.9, 620.3, 480.2, 430.4,
                                        515.6, 470.8, 390.0, 445.5, 610.1, 505.5, 498.7, 377.2,
                                        560.9, 433.3, 421.1, 489.0, 532.4, 401.6, 467.7};
const std::vector<double> kX = {12.0, 15.5, 11.2, 18.9, 20.1, 17.3,
                                25.4, 22.8, 19.6, 27.1, 30.2, 28.4};
const std::vector<double> kY = {101.0, 118.2, 99.5,  130.7, 150.3, 141.1,
                                170.2, 160.9, 149.8, 181.4, 199.0, 190.6};
const std::vector<double> kZ = {5.0, 3.1, 6.2, 2.2, 1.9, 4.4, 0.8, 1.5, 2.9, 0.7, 0.2, 1.1};

double sorted_rank(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  std::size_t k = 0;
  while (static_cast<double>(k + 1) < q * static_cast<double>(xs.size()) - 1e-9) ++k;
  return xs[k];
}

}  // namespace

TEST_CASE("p90 uses the nearest rank") {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  CHECK(p90(xs) == 90.0);
  CHECK(p90(std::vector<double>{7.0}) == 7.0);
  CHECK(p90(kLatencies) == doctest::Approx(560.9).epsilon(1e-12));
  CHECK(percentile(kLatencies, 0.5) == 467.7);
  CHECK(percentile(kLatencies, 0.99) == 620.3);
  CHECK_THROWS_WITH(p90(std::vector<double>{}), "empty series");
  CHECK_THROWS(percentile(xs, 0.0));
}

TEST_CASE("p90 of uniform samples lands near 0.9") {
  Gen g(11);
  const auto xs = g.series(1000, 0.0, 1.0);
  CHECK(std::abs(p90(xs) - 0.9) <= 0.03);
  CHECK(p90(xs) == sorted_rank(xs, 0.9));
}

TEST_CASE("percentile matches a sort oracle on random inputs") {
  Gen g(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 60));
    const auto xs = g.series(n, -100.0, 100.0);
    const double q = g.real(0.01, 1.0);
    CHECK(percentile(xs, q) == sorted_rank(xs, q));
    // monotone in q
    CHECK(percentile(xs, std::min(1.0, q + 0.1)) >= percentile(xs, q));
  }
}

TEST_CASE("pearson") {
  CHECK(std::abs(pearson(kX, kY) - 0.9885613069211168) < 1e-9);
  CHECK(std::abs(pearson(kX, kZ) - -0.933821114800716) < 1e-9);
  CHECK(pearson(kX, kX) == doctest::Approx(1.0));
  const std::vector<double> flat(kX.size(), 3.0);
  CHECK(pearson(kX, flat) == 0.0);
  CHECK_THROWS(pearson(kX, std::vector<double>{1.0, 2.0}));
  CHECK_THROWS(pearson(std::vector<double>{1.0}, std::vector<double>{1.0}));
}

TEST_CASE("pearson is symmetric, bounded and affine invariant") {
  Gen g(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(2, 40));
    const auto a = g.series(n, -5.0, 5.0);
    const auto b = g.series(n, -5.0, 5.0);
    const double r = pearson(a, b);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(pearson(b, a) == doctest::Approx(r).epsilon(1e-12));
    const double scale = g.real(0.5, 3.0);
    const double shift = g.real(-10.0, 10.0);
    std::vector<double> c(a);
    for (double& v : c) v = scale * v + shift;
    CHECK(pearson(c, b) == doctest::Approx(r).epsilon(1e-9));
  }
}

TEST_CASE("mean and sample variance") {
  const std::vector<double> xs = {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(mean(xs) == 5.0);
  CHECK(sample_variance(xs) == doctest::Approx(32.0 / 7.0));
  CHECK_THROWS(mean(std::vector<double>{}));
  CHECK_THROWS(sample_variance(std::vector<double>{1.0}));
}

TEST_CASE("service graph") {
  ServiceGraph g;
  for (const char* s : {"a", "b", "c", "d"}) g.add_service(s);
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  g.add_edge("a", "d");
  CHECK(g.size() == 4);
  CHECK(g.has_edge(g.index_of("a"), g.index_of("b")));
  CHECK_FALSE(g.has_edge(g.index_of("b"), g.index_of("a")));
  CHECK(min_hops(g, "a", "c") == 2u);
  CHECK_FALSE(min_hops(g, "c", "a").has_value());
  CHECK_THROWS(g.add_edge("a", "zz"));

  const std::vector<ServiceId> keep = {"c", "a", "b"};
  const auto sub = g.induced_subgraph(keep);
  CHECK(sub.services() == std::vector<ServiceId>{"a", "b", "c"});
  CHECK(sub.edges().size() == 2);

  const auto order = g.topological_order();
  REQUIRE(order.has_value());
  g.add_edge("c", "a");
  CHECK_FALSE(g.topological_order().has_value());
}

TEST_CASE("induced subgraphs keep exactly the parent edges between kept nodes") {
  Gen g(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto graph = testing::random_digraph(g, static_cast<std::size_t>(g.integer(1, 8)), 0.3);
    std::vector<ServiceId> keep;
    for (const auto& id : graph.services()) {
      if (g.coin()) keep.push_back(id);
    }
    const auto sub = graph.induced_subgraph(keep);
    CHECK(sub.size() == keep.size());
    for (const auto& e : sub.edges()) {
      CHECK(graph.has_edge(graph.index_of(sub.id(e.caller)), graph.index_of(sub.id(e.callee))));
    }
    std::size_t expected = 0;
    for (const auto& e : graph.edges()) {
      const bool in = std::find(keep.begin(), keep.end(), graph.id(e.caller)) != keep.end() &&
                      std::find(keep.begin(), keep.end(), graph.id(e.callee)) != keep.end();
      expected += in ? 1 : 0;
    }
    CHECK(sub.edges().size() == expected);
  }
}

TEST_CASE("metric window queries and slices") {
  ServiceGraph graph;
  graph.add_service("a");
  graph.add_service("b");
  graph.add_edge("a", "b");
  MetricWindow w(5.0, 30.0);
  for (int i = 0; i < 8; ++i) {
    w.append(testing::snapshot_with(graph, 5.0 * i, {{"b", 100.0 + i}}, i));
  }
  CHECK(w.size() == 6);  // retention keeps 30 s
  CHECK(w.duration() == 30.0);
  CHECK(w.query("b", MetricKind::p90_latency, 15.0) == std::vector<double>{105, 106, 107});
  CHECK(w.edge_query("a", "b", 10.0) == std::vector<double>{106, 107});
  const auto past = w.slice(10.0, 10.0);
  CHECK(past.query("a", MetricKind::workload, 10.0) == std::vector<double>{4, 5});
  CHECK_THROWS(w.query("a", MetricKind::workload, 35.0));
  CHECK_THROWS(w.query("a", MetricKind::workload, 7.0));
  CHECK_THROWS(w.append(testing::snapshot_with(graph, 100.0, {})));
  CHECK(parse_metric_kind(to_string(MetricKind::cpu)) == MetricKind::cpu);
}

TEST_CASE("metric trace csv round trip") {
  ServiceGraph graph;
  graph.add_service("a");
  graph.add_service("b");
  graph.add_edge("a", "b");
  std::vector<MetricSnapshot> snaps;
  for (int i = 0; i < 4; ++i) snaps.push_back(testing::snapshot_with(graph, 5.0 * i, {{"b", 0.1 + i}}));
  std::stringstream buf;
  write_metric_trace(buf, snaps);
  auto back = read_metric_trace(buf);
  REQUIRE(back.size() == snaps.size());
  for (auto& s : back) attach_edge_latencies(s, graph);
  CHECK(back == snaps);

  std::stringstream bad("timestamp,service\n0,a\n");
  CHECK_THROWS(read_metric_trace(bad));
}
