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

#include "pbscale/metrics/metric_window.hpp"

#include <cmath>
#include <string>

#include "pbscale/error.hpp"

namespace pbscale::metrics {

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "workload") return MetricKind::workload;
  if (name == "p90_latency") return MetricKind::p90_latency;
  if (name == "cpu") return MetricKind::cpu;
  if (name == "mem") return MetricKind::mem;
  if (name == "replicas") return MetricKind::replicas;
  throw Error("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::workload: return "workload";
    case MetricKind::p90_latency: return "p90_latency";
    case MetricKind::cpu: return "cpu";
    case MetricKind::mem: return "mem";
    case MetricKind::replicas: return "replicas";
  }
  return "?";
}

double ServiceRecord::get(MetricKind kind) const {
  switch (kind) {
    case MetricKind::workload: return workload;
    case MetricKind::p90_latency: return p90_latency;
    case MetricKind::cpu: return cpu_usage;
    case MetricKind::mem: return mem_usage;
    case MetricKind::replicas: return static_cast<double>(replicas);
  }
  throw Error("unknown metric kind");
}

const ServiceRecord& MetricSnapshot::at(const ServiceId& id) const {
  auto it = services.find(id);
  if (it == services.end()) throw Error("unknown service '" + id.str() + "'");
  return it->second;
}

void validate(const MetricSnapshot& snapshot) {
  for (const auto& [id, rec] : snapshot.services) {
    if (rec.replicas < 1) throw Error(id.str() + ": replicas must be >= 1");
    if (!(rec.workload >= 0.0)) throw Error(id.str() + ": workload must be >= 0");
    if (!(rec.p90_latency >= 0.0)) throw Error(id.str() + ": latency must be >= 0");
  }
  for (const auto& [edge, latency] : snapshot.edge_p90) {
    if (!(latency >= 0.0)) {
      throw Error(edge.first.str() + "->" + edge.second.str() + ": latency must be >= 0");
    }
  }
}

MetricWindow::MetricWindow(double interval, double retention)
    : interval_(interval), retention_(retention) {
  if (!(interval > 0.0)) throw Error("collection interval must be positive");
  if (retention < interval) throw Error("retention shorter than one interval");
}

void MetricWindow::append(MetricSnapshot snapshot) {
  validate(snapshot);
  if (!snapshots_.empty()) {
    const double expected = snapshots_.back().timestamp + interval_;
    if (std::abs(snapshot.timestamp - expected) > 1e-6 * interval_) {
      throw Error("snapshot at t=" + std::to_string(snapshot.timestamp) +
                  " breaks the collection interval (expected t=" + std::to_string(expected) + ")");
    }
  }
  snapshots_.push_back(std::move(snapshot));
  const auto keep = static_cast<std::size_t>(std::floor(retention_ / interval_ + 1e-9));
  while (snapshots_.size() > keep) snapshots_.pop_front();
}

const MetricSnapshot& MetricWindow::latest() const {
  if (snapshots_.empty()) throw Error("metric window is empty");
  return snapshots_.back();
}

std::size_t MetricWindow::samples_for(double span) const {
  const double ratio = span / interval_;
  const double rounded = std::round(ratio);
  if (!(span > 0.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw Error("span must be a positive multiple of the collection interval");
  }
  return static_cast<std::size_t>(rounded);
}

MetricWindow MetricWindow::slice(double span, double skip) const {
  const std::size_t n = samples_for(span);
  const std::size_t s = skip > 0.0 ? samples_for(skip) : 0;
  if (n + s > snapshots_.size()) {
    throw Error("requested span exceeds the window duration (" + std::to_string(duration()) +
                " s)");
  }
  MetricWindow out(interval_, std::max(retention_, static_cast<double>(n) * interval_));
  const std::size_t end = snapshots_.size() - s;
  for (std::size_t i = end - n; i < end; ++i) out.snapshots_.push_back(snapshots_[i]);
  return out;
}

std::vector<double> MetricWindow::query(const ServiceId& service, MetricKind kind,
                                        double span) const {
  const std::size_t n = samples_for(span);
  if (n > snapshots_.size()) {
    throw Error("requested span exceeds the window duration (" + std::to_string(duration()) +
                " s)");
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = snapshots_.size() - n; i < snapshots_.size(); ++i) {
    out.push_back(snapshots_[i].at(service).get(kind));
  }
  return out;
}

std::vector<double> MetricWindow::edge_query(const ServiceId& caller, const ServiceId& callee,
                                             double span) const {
  const std::size_t n = samples_for(span);
  if (n > snapshots_.size()) {
    throw Error("requested span exceeds the window duration (" + std::to_string(duration()) +
                " s)");
  }
  const EdgeKey key{caller, callee};
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = snapshots_.size() - n; i < snapshots_.size(); ++i) {
    auto it = snapshots_[i].edge_p90.find(key);
    if (it == snapshots_[i].edge_p90.end()) {
      throw Error("no latency recorded for edge " + caller.str() + " -> " + callee.str());
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace pbscale::metrics
