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

#include "pbscale/analysis/redundancy.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "pbscale/error.hpp"
#include "pbscale/metrics/stats.hpp"

namespace pbscale::analysis {

TTestResult t_test_one_sided(std::span<const double> current, std::span<const double> reference) {
  if (current.size() < 2 || reference.size() < 2) {
    throw Error("t-test needs at least two samples per series");
  }
  const double n1 = static_cast<double>(current.size());
  const double n2 = static_cast<double>(reference.size());
  const double m1 = metrics::mean(current);
  const double m2 = metrics::mean(reference);
  const double a = metrics::sample_variance(current) / n1;
  const double b = metrics::sample_variance(reference) / n2;
  const double se2 = a + b;

  if (se2 == 0.0) {
    if (m1 == m2) return {0.0, 0.5};
    constexpr double inf = std::numeric_limits<double>::infinity();
    return m1 < m2 ? TTestResult{-inf, 0.0} : TTestResult{inf, 1.0};
  }
  const double t = (m1 - m2) / std::sqrt(se2);
  const double df = se2 * se2 / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
  const boost::math::students_t dist(df);
  return {t, boost::math::cdf(dist, t)};
}

std::vector<RedundantService> redundancy_check(const MetricWindow& window,
                                               std::span<const ServiceId> services,
                                               const RedundancyOptions& options) {
  return redundancy_check(window, services, options, {});
}

std::vector<RedundantService> redundancy_check(
    const MetricWindow& window, std::span<const ServiceId> services,
    const RedundancyOptions& options,
    const std::map<ServiceId, std::vector<double>>& references) {
  if (!(options.beta > 0.0 && options.beta <= 1.0)) throw Error("beta must be in (0, 1]");
  if (!(options.cl >= 0.0 && options.cl <= 1.0)) throw Error("cl must be in [0, 1]");
  std::vector<RedundantService> out;
  if (window.duration() + 1e-9 < options.current_span) return out;
  const bool has_past = window.duration() + 1e-9 >= options.current_span + options.past_span;

  const auto current = window.slice(options.current_span);
  for (const auto& id : services) {
    std::vector<double> wp;
    if (const auto it = references.find(id); it != references.end()) {
      wp = it->second;
    } else if (has_past) {
      wp = window.slice(options.past_span, options.current_span)
               .query(id, metrics::MetricKind::workload, options.past_span);
    }
    const auto wc = current.query(id, metrics::MetricKind::workload, options.current_span);
    if (wc.size() < 2 || wp.size() < 2) continue;
    for (double& w : wp) w *= options.beta;
    const auto res = t_test_one_sided(wc, wp);
    if (res.t < 0.0 && res.p < options.cl) out.push_back({id, res.t, res.p});
  }
  return out;
}

}  // namespace pbscale::analysis
