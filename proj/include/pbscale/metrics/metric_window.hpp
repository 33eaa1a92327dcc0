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

#include <cstddef>
#include <deque>
#include <map>
#include <string_view>
#include <vector>

#include "pbscale/metrics/service_graph.hpp"

namespace pbscale::metrics {

enum class MetricKind { workload, p90_latency, cpu, mem, replicas };

MetricKind parse_metric_kind(std::string_view name);
std::string_view to_string(MetricKind kind);

struct ServiceRecord {
  double workload = 0.0;     // requests/s
  double p90_latency = 0.0;  // ms, as observed by callers
  double cpu_usage = 0.0;    // vCPU
  double mem_usage = 0.0;    // GB
  int replicas = 1;

  double get(MetricKind kind) const;
  friend bool operator==(const ServiceRecord&, const ServiceRecord&) = default;
};

struct MetricSnapshot {
  double timestamp = 0.0;  // seconds
  std::map<ServiceId, ServiceRecord> services;
  std::map<EdgeKey, double> edge_p90;  // caller -> callee P90 latency, ms

  const ServiceRecord& at(const ServiceId& id) const;
  friend bool operator==(const MetricSnapshot&, const MetricSnapshot&) = default;
};

/// Throws if a record breaks replicas >= 1, workload >= 0 or latency >= 0.
void validate(const MetricSnapshot& snapshot);

/// Time-ordered snapshots spaced by a fixed collection interval. Snapshots
/// older than the retention horizon are evicted on append.
class MetricWindow {
 public:
  static constexpr double kDefaultInterval = 5.0;
  static constexpr double kDefaultRetention = 600.0;

  explicit MetricWindow(double interval = kDefaultInterval, double retention = kDefaultRetention);

  void append(MetricSnapshot snapshot);

  bool empty() const noexcept { return snapshots_.empty(); }
  std::size_t size() const noexcept { return snapshots_.size(); }
  double interval() const noexcept { return interval_; }
  double retention() const noexcept { return retention_; }
  /// Seconds covered by the stored samples (one interval per sample).
  double duration() const noexcept { return static_cast<double>(size()) * interval_; }
  const std::deque<MetricSnapshot>& snapshots() const noexcept { return snapshots_; }
  const MetricSnapshot& latest() const;

  /// Series of `kind` for `service` over the trailing `span` seconds.
  std::vector<double> query(const ServiceId& service, MetricKind kind, double span) const;
  /// Caller -> callee P90 series over the trailing `span` seconds.
  std::vector<double> edge_query(const ServiceId& caller, const ServiceId& callee,
                                 double span) const;

  /// Sub-window holding the samples whose age lies in [skip, skip + span)
  /// seconds, counted back from the latest sample.
  MetricWindow slice(double span, double skip = 0.0) const;
  MetricWindow trailing(double span) const { return slice(span, 0.0); }

 private:
  std::size_t samples_for(double span) const;

  double interval_;
  double retention_;
  std::deque<MetricSnapshot> snapshots_;
};

}  // namespace pbscale::metrics
