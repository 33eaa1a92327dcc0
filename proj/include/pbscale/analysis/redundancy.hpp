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

#include "pbscale/metrics/metric_window.hpp"

namespace pbscale::analysis {

using metrics::MetricWindow;
using metrics::ServiceId;

struct TTestResult {
  double t = 0.0;
  double p = 0.5;
};

/// Welch two-sample t-test with the one-sided alternative
/// mean(current) < mean(reference). p is the left-tail probability under
/// Student's t with Welch-Satterthwaite degrees of freedom.
TTestResult t_test_one_sided(std::span<const double> current, std::span<const double> reference);

struct RedundancyOptions {
  double beta = 0.9;           // significance scale on past workload
  double cl = 0.05;            // confidence level
  double current_span = 60.0;  // s of "current" workload
  double past_span = 60.0;     // s of "past" workload, immediately before current
};

struct RedundantService {
  ServiceId id;
  double t = 0.0;
  double p = 0.0;
};

/// Services whose current workload is significantly below beta times their
/// past workload (t < 0 and p < cl). Services without enough history are
/// skipped. Order follows `services`.
std::vector<RedundantService> redundancy_check(const MetricWindow& window,
                                               std::span<const ServiceId> services,
                                               const RedundancyOptions& options = {});

/// As above, but a service with an entry in `references` is tested against
/// that series instead of the span preceding the current one.
std::vector<RedundantService> redundancy_check(
    const MetricWindow& window, std::span<const ServiceId> services,
    const RedundancyOptions& options,
    const std::map<ServiceId, std::vector<double>>& references);

}  // namespace pbscale::analysis
