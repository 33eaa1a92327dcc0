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

#include <iosfwd>
#include <string>
#include <vector>

#include "pbscale/metrics/metric_window.hpp"

namespace pbscale::metrics {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
double parse_number(const std::string& text);

/// Splits one CSV line on commas (no quoting; ids never contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

// Metric trace CSV: `timestamp,service,workload,p90_latency,cpu,mem,replicas`,
// one row per service per tick, header row mandatory. The p90_latency column
// is the latency observed by callers, so every in-edge of a service carries
// that value and edge series are rebuilt from it on load.

void write_metric_trace(std::ostream& out, const std::vector<MetricSnapshot>& snapshots);
std::vector<MetricSnapshot> read_metric_trace(std::istream& in);

/// Fills snapshot.edge_p90 for every graph edge from the callee's p90_latency.
void attach_edge_latencies(MetricSnapshot& snapshot, const ServiceGraph& graph);

/// Loads a trace into a window, rebuilding edge latencies from `graph`.
MetricWindow load_metric_window(std::istream& in, const ServiceGraph& graph,
                                double interval = MetricWindow::kDefaultInterval,
                                double retention = MetricWindow::kDefaultRetention);

}  // namespace pbscale::metrics
