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
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "pbscale/analysis/detection.hpp"
#include "pbscale/analysis/redundancy.hpp"
#include "pbscale/analysis/toporank.hpp"
#include "pbscale/error.hpp"

using namespace pbscale;
using namespace pbscale::analysis;
using pbscale::testing::Gen;

namespace {

// Reference values from scipy.stats.ttest_ind(equal_var=False, alternative="less").
const std::vector<double> kCurrent = {80.2, 78.5, 82.1, 79.9, 77.4, 81.0,
                                      76.8, 79.3, 78.1, 80.6, 77.9, 79.0};
const std::vector<double> kPast = {101.5, 99.2, 103.8, 100.4, 98.7, 102.2,
                                   97.9,  101.1, 100.0, 99.6, 102.9, 98.4};
const std::vector<double> kC2 = {50.1, 49.0, 52.3, 47.7, 51.2, 48.8};
const std::vector<double> kP2 = {50.5, 52.0, 47.9, 49.4, 51.8, 50.2, 48.6, 49.9};

metrics::ServiceGraph pair_graph() {
  metrics::ServiceGraph g;
  g.add_service("a");
  g.add_service("b");
  g.add_edge("a", "b");
  return g;
}

// Window whose workload for "a" follows `past` then `current`, one sample per 5 s.
MetricWindow workload_window(const std::vector<double>& past, const std::vector<double>& current) {
  const auto graph = pair_graph();
  MetricWindow w(5.0, 600.0);
  double t = 0.0;
  for (const auto* part : {&past, &current}) {
    for (double v : *part) {
      auto snap = testing::snapshot_with(graph, t, {});
      snap.services[metrics::ServiceId("a")].workload = v;
      w.append(snap);
      t += 5.0;
    }
  }
  return w;
}

std::vector<double> scaled(std::vector<double> xs, double k) {
  for (double& x : xs) x *= k;
  return xs;
}

}  // namespace

TEST_CASE("detection threshold and single snapshot examples") {
  CHECK(detection_threshold(500.0, 0.2) == doctest::Approx(550.0));
  const auto graph = pair_graph();
  MetricWindow bad(5.0, 60.0);
  bad.append(testing::snapshot_with(graph, 0.0, {{"b", 650.0}}));
  const auto abnormal = detect_slo_violations(graph, bad, 500.0, 0.2);
  CHECK(abnormal.contains("b"));
  CHECK_FALSE(abnormal.contains("a"));
  CHECK(abnormal.count("b") == 1);

  MetricWindow ok(5.0, 60.0);
  ok.append(testing::snapshot_with(graph, 0.0, {{"b", 550.0}}));
  CHECK(detect_slo_violations(graph, ok, 500.0, 0.2).empty());

  // the entry has no caller and is judged on its own latency
  MetricWindow entry(5.0, 60.0);
  entry.append(testing::snapshot_with(graph, 0.0, {{"a", 900.0}}));
  CHECK(detect_slo_violations(graph, entry, 500.0, 0.2).contains("a"));

  CHECK_THROWS(detect_slo_violations(graph, ok, 0.0, 0.2));
  CHECK_THROWS(detect_slo_violations(graph, ok, 500.0, 1.5));
}

TEST_CASE("violation counts accumulate over snapshots and callers") {
  metrics::ServiceGraph g;
  for (const char* s : {"a", "b", "c"}) g.add_service(s);
  g.add_edge("a", "c");
  g.add_edge("b", "c");
  MetricWindow w(5.0, 60.0);
  for (int i = 0; i < 3; ++i) w.append(testing::snapshot_with(g, 5.0 * i, {{"c", 700.0}}));
  CHECK(detect_slo_violations(g, w, 500.0, 0.2).count("c") == 6);
}

TEST_CASE("a larger alpha never flags more services") {
  Gen g(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto graph = testing::random_dag(g, static_cast<std::size_t>(g.integer(1, 8)), 0.4);
    MetricWindow w(5.0, 60.0);
    for (int s = 0; s < 3; ++s) {
      std::map<metrics::ServiceId, double> p90;
      for (const auto& id : graph.services()) p90[id] = g.real(300.0, 700.0);
      w.append(testing::snapshot_with(graph, 5.0 * s, p90));
    }
    const double a1 = g.real(0.0, 1.0);
    const double a2 = g.real(a1, 1.0);
    const auto loose = detect_slo_violations(graph, w, 500.0, a1);
    const auto strict = detect_slo_violations(graph, w, 500.0, a2);
    for (const auto& id : strict.services()) {
      CHECK(loose.contains(id));
      CHECK(loose.count(id) >= strict.count(id));
    }
  }
}

TEST_CASE("welch t-test matches frozen references") {
  const auto wp = scaled(kPast, 0.9);
  const auto r = t_test_one_sided(kCurrent, wp);
  CHECK(std::abs(r.t - -16.835699683141513) < 1e-9);
  CHECK(std::abs(r.p - 2.5043583163208195e-14) < 1e-9);

  const auto r2 = t_test_one_sided(kC2, kP2);
  CHECK(std::abs(r2.t - -0.21908423797637014) < 1e-9);
  CHECK(std::abs(r2.p - 0.41554728819268444) < 1e-9);

  std::vector<double> shifted(kC2);
  for (double& x : shifted) x -= 3.0;
  const auto r3 = t_test_one_sided(kP2, shifted);
  CHECK(std::abs(r3.t - 3.7244320455981597) < 1e-9);
  CHECK(std::abs(r3.p - 0.9979451929555178) < 1e-9);

  const auto same = t_test_one_sided(kC2, kC2);
  CHECK(same.t == 0.0);
  CHECK(same.p == doctest::Approx(0.5));
  const std::vector<double> flat = {3.0, 3.0, 3.0};
  CHECK(t_test_one_sided(flat, flat).p == 0.5);
  CHECK_THROWS(t_test_one_sided(std::vector<double>{1.0}, kC2));
}

TEST_CASE("t-test p-values are valid probabilities and flip with the arguments") {
  Gen g(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = g.series(static_cast<std::size_t>(g.integer(2, 20)), 0.0, 10.0);
    const auto b = g.series(static_cast<std::size_t>(g.integer(2, 20)), 0.0, 10.0);
    const auto ab = t_test_one_sided(a, b);
    const auto ba = t_test_one_sided(b, a);
    CHECK(ab.p >= 0.0);
    CHECK(ab.p <= 1.0);
    CHECK(ab.t == doctest::Approx(-ba.t));
    CHECK(ab.p + ba.p == doctest::Approx(1.0));
  }
}

TEST_CASE("redundancy check") {
  const std::vector<metrics::ServiceId> ids = {"a"};
  RedundancyOptions o;
  o.current_span = 60.0;
  o.past_span = 60.0;

  // workload dropped to 30 %
  const auto dropped = workload_window(kPast, scaled(kPast, 0.3));
  const auto r = redundancy_check(dropped, ids, o);
  REQUIRE(r.size() == 1);
  CHECK(r[0].id == metrics::ServiceId("a"));
  CHECK(r[0].t < 0.0);

  // steady workload is not redundant
  CHECK(redundancy_check(workload_window(kPast, kPast), ids, o).empty());

  auto never = o;
  never.cl = 0.0;
  CHECK(redundancy_check(dropped, ids, never).empty());

  // not enough history
  CHECK(redundancy_check(workload_window({}, kPast), ids, o).empty());

  // an explicit reference replaces the preceding span
  const std::map<metrics::ServiceId, std::vector<double>> ref = {{"a", scaled(kPast, 3.0)}};
  CHECK(redundancy_check(workload_window({}, kPast), ids, o, ref).size() == 1);
  const std::map<metrics::ServiceId, std::vector<double>> same = {{"a", kPast}};
  CHECK(redundancy_check(workload_window({}, kPast), ids, o, same).empty());

  auto bad = o;
  bad.beta = 0.0;
  CHECK_THROWS(redundancy_check(dropped, ids, bad));
}

TEST_CASE("redundancy is monotone in the confidence level") {
  Gen g(23);
  const std::vector<metrics::ServiceId> ids = {"a", "b"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = workload_window(g.series(12, 50.0, 150.0), g.series(12, 10.0, 150.0));
    RedundancyOptions lo;
    lo.cl = g.real(0.0, 0.5);
    auto hi = lo;
    hi.cl = g.real(lo.cl, 1.0);
    CHECK(redundancy_check(w, ids, lo).size() <= redundancy_check(w, ids, hi).size());
  }
}

TEST_CASE("topological potential") {
  metrics::ServiceGraph g;
  for (const char* s : {"a", "b", "c", "d"}) g.add_service(s);
  g.add_edge("a", "d");
  g.add_edge("b", "d");
  g.add_edge("c", "d");
  const auto phi = topological_potential(g, {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}, 1.0);
  CHECK(phi[g.index_of("d")] == doctest::Approx(3.0 * std::exp(-1.0)));
  CHECK(phi[g.index_of("a")] == 0.0);

  metrics::ServiceGraph chain;
  for (const char* s : {"x", "y", "z"}) chain.add_service(s);
  chain.add_edge("x", "y");
  chain.add_edge("y", "z");
  const auto p2 = topological_potential(chain, {{"x", 2}}, 2.0);
  CHECK(p2[2] == doctest::Approx(2.0 * std::exp(-1.0)));

  CHECK_THROWS(topological_potential(g, {}, 0.0));
  CHECK(normalize_preference(std::vector<double>{0.0, 0.0}) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("potential equals an all-pairs BFS oracle") {
  Gen g(24);
  for (int trial = 0; trial < 200; ++trial) {
    const auto graph = testing::random_digraph(g, static_cast<std::size_t>(g.integer(1, 9)), 0.3);
    std::map<metrics::ServiceId, int> m;
    for (const auto& id : graph.services()) m[id] = g.integer(0, 5);
    const double sigma = g.real(0.3, 3.0);
    const auto phi = topological_potential(graph, m, sigma);
    const auto oracle = testing::potential_oracle(graph, m, sigma);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      CHECK(phi[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
      CHECK(phi[i] >= 0.0);
    }
    // non-decreasing in every degree
    const auto& bump = graph.id(static_cast<std::size_t>(g.integer(0, static_cast<int>(graph.size()) - 1)));
    auto more = m;
    more[bump] += 1;
    const auto phi2 = topological_potential(graph, more, sigma);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(phi2[i] >= phi[i]);
  }
}

TEST_CASE("transition matrix rows are stochastic") {
  metrics::ServiceGraph g;
  for (const char* s : {"a", "b", "c"}) g.add_service(s);
  g.add_edge("a", "b");
  g.add_edge("a", "c");
  MetricWindow w(5.0, 60.0);
  for (int i = 0; i < 6; ++i) {
    // b tracks a, c is flat
    w.append(testing::snapshot_with(g, 5.0 * i, {{"a", 100.0 + 10 * i}, {"b", 50.0 + 3 * i}}));
  }
  const auto p = build_transition_matrix(g, w, 60.0);
  CHECK(p(0, 1) == doctest::Approx(1.0));
  CHECK(p(0, 2) == doctest::Approx(0.0));
  CHECK(p.dangling(1));
  CHECK(p.dangling(2));

  // no correlation anywhere falls back to uniform rows
  MetricWindow flat(5.0, 60.0);
  for (int i = 0; i < 6; ++i) flat.append(testing::snapshot_with(g, 5.0 * i, {}));
  const auto q = build_transition_matrix(g, flat, 60.0);
  CHECK(q(0, 1) == 0.5);
  CHECK(q(0, 2) == 0.5);

  Gen gen(25);
  for (int trial = 0; trial < 100; ++trial) {
    const auto graph = testing::random_digraph(gen, static_cast<std::size_t>(gen.integer(1, 8)), 0.4);
    MetricWindow win(5.0, 60.0);
    for (int s = 0; s < 12; ++s) {
      std::map<metrics::ServiceId, double> p90;
      for (const auto& id : graph.services()) p90[id] = gen.real(10.0, 500.0);
      win.append(testing::snapshot_with(graph, 5.0 * s, p90, gen.real(1.0, 100.0)));
    }
    const auto m = build_transition_matrix(graph, win, 60.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.dangling(i)) {
        CHECK(graph.callees(i).empty());
        continue;
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < m.size(); ++j) {
        CHECK(m(i, j) >= 0.0);
        if (!graph.has_edge(i, j)) CHECK(m(i, j) == 0.0);
        sum += m(i, j);
      }
      CHECK(sum == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("pagerank examples") {
  analysis::TransitionMatrix swap({"a", "b"});
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  const auto r = personalized_pagerank(swap, std::vector<double>{0.5, 0.5});
  CHECK(r.scores[0] == doctest::Approx(0.5));
  CHECK(r.scores[1] == doctest::Approx(0.5));

  analysis::TransitionMatrix one({"a"});
  one.set_dangling(0, true);
  CHECK(personalized_pagerank(one, std::vector<double>{1.0}).scores[0] == doctest::Approx(1.0));

  CHECK_THROWS(personalized_pagerank(swap, std::vector<double>{1.0}));
  CHECK_THROWS(personalized_pagerank(swap, std::vector<double>{0.7, 0.7}));
  PageRankOptions bad;
  bad.delta = 0.0;
  CHECK_THROWS(personalized_pagerank(swap, std::vector<double>{0.5, 0.5}, bad));
}

TEST_CASE("pagerank agrees with a long power iteration and contracts") {
  Gen g(26);
  PageRankOptions tight;
  tight.tol = 1e-12;
  tight.max_iter = 1000;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 8));
    const auto p = testing::random_stochastic(g, n, 0.25);
    const auto u = testing::random_distribution(g, n);
    const auto r = personalized_pagerank(p, u, tight);
    const auto oracle = testing::power_iteration(p, u, tight.delta, 10000);
    double l1 = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      l1 += std::abs(r.scores[i] - oracle[i]);
      sum += r.scores[i];
      CHECK(r.scores[i] >= 0.0);
    }
    CHECK(l1 < 1e-9);
    CHECK(sum == doctest::Approx(1.0));
    // successive L1 changes shrink by at least (1 - delta)
    for (std::size_t k = 1; k < r.l1_changes.size(); ++k) {
      CHECK(r.l1_changes[k] <= (1.0 - tight.delta) * r.l1_changes[k - 1] + 1e-15);
    }
  }
}

TEST_CASE("toporank") {
  const auto graph = pair_graph();
  MetricWindow w(5.0, 60.0);
  for (int i = 0; i < 12; ++i) {
    w.append(testing::snapshot_with(graph, 5.0 * i, {{"a", 600.0 + i}, {"b", 580.0 + i}}));
  }
  AbnormalSet only_b;
  only_b.violation_counts = {{"b", 3}};
  const auto single = toporank(graph, w, only_b);
  REQUIRE(single.size() == 1);
  CHECK(single.entries[0].score == doctest::Approx(1.0));

  AbnormalSet both;
  both.violation_counts = {{"a", 12}, {"b", 12}};
  const auto ranking = toporank(graph, w, both);
  CHECK(ranking.top(1) == std::vector<metrics::ServiceId>{"b"});
  CHECK_THROWS(toporank(graph, w, AbnormalSet{}));
  CHECK(uniform_pagerank(graph, w, both).size() == 2);
}

TEST_CASE("toporank scores form a distribution and follow relabeling") {
  Gen g(27);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 7));
    const auto graph = testing::random_dag(g, n, 0.4);
    MetricWindow w(5.0, 60.0);
    std::vector<std::map<metrics::ServiceId, double>> series;
    for (int s = 0; s < 12; ++s) {
      std::map<metrics::ServiceId, double> p90;
      for (const auto& id : graph.services()) p90[id] = g.real(560.0, 900.0);
      series.push_back(p90);
      w.append(testing::snapshot_with(graph, 5.0 * s, p90));
    }
    AbnormalSet abnormal;
    for (const auto& id : graph.services()) abnormal.violation_counts[id] = g.integer(1, 12);
    const auto ranking = toporank(graph, w, abnormal);
    double sum = 0.0;
    for (const auto& e : ranking.entries) sum += e.score;
    CHECK(sum == doctest::Approx(1.0));

    // rename sK -> tK in reverse index order; scores follow the services
    auto rename = [&](const metrics::ServiceId& id) {
      return metrics::ServiceId("t" + std::to_string(n - 1 - std::stoul(id.str().substr(1))));
    };
    metrics::ServiceGraph renamed;
    for (std::size_t i = n; i-- > 0;) renamed.add_service(rename(graph.id(i)));
    for (const auto& e : graph.edges()) renamed.add_edge(rename(graph.id(e.caller)), rename(graph.id(e.callee)));
    MetricWindow w2(5.0, 60.0);
    for (int s = 0; s < 12; ++s) {
      std::map<metrics::ServiceId, double> p90;
      for (const auto& [id, v] : series[static_cast<std::size_t>(s)]) p90[rename(id)] = v;
      w2.append(testing::snapshot_with(renamed, 5.0 * s, p90));
    }
    AbnormalSet abnormal2;
    for (const auto& [id, c] : abnormal.violation_counts) abnormal2.violation_counts[rename(id)] = c;
    const auto ranking2 = toporank(renamed, w2, abnormal2);
    std::map<metrics::ServiceId, double> by_id;
    for (const auto& e : ranking2.entries) by_id[e.id] = e.score;
    for (const auto& e : ranking.entries) {
      CHECK(by_id.at(rename(e.id)) == doctest::Approx(e.score).epsilon(1e-9));
    }
  }
}
