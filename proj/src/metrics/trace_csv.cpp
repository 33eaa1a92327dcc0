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

#include "pbscale/metrics/trace_csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <system_error>

#include "pbscale/error.hpp"

namespace pbscale::metrics {

namespace {

constexpr const char* kTraceHeader = "timestamp,service,workload,p90_latency,cpu,mem,replicas";

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) throw Error("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void write_metric_trace(std::ostream& out, const std::vector<MetricSnapshot>& snapshots) {
  out << kTraceHeader << '\n';
  for (const auto& snap : snapshots) {
    const auto ts = format_number(snap.timestamp);
    for (const auto& [id, rec] : snap.services) {
      out << ts << ',' << id.str() << ',' << format_number(rec.workload) << ','
          << format_number(rec.p90_latency) << ',' << format_number(rec.cpu_usage) << ','
          << format_number(rec.mem_usage) << ',' << rec.replicas << '\n';
    }
  }
}

std::vector<MetricSnapshot> read_metric_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kTraceHeader) {
    throw Error(std::string("metric trace must start with header '") + kTraceHeader + "'");
  }
  std::vector<MetricSnapshot> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) {
      throw Error("metric trace line " + std::to_string(line_no) + ": expected 7 fields");
    }
    const double ts = parse_number(f[0]);
    if (out.empty() || out.back().timestamp != ts) {
      if (!out.empty() && ts < out.back().timestamp) {
        throw Error("metric trace line " + std::to_string(line_no) + ": timestamps go backwards");
      }
      out.push_back(MetricSnapshot{ts, {}, {}});
    }
    ServiceRecord rec;
    rec.workload = parse_number(f[2]);
    rec.p90_latency = parse_number(f[3]);
    rec.cpu_usage = parse_number(f[4]);
    rec.mem_usage = parse_number(f[5]);
    const double replicas = parse_number(f[6]);
    if (replicas != std::floor(replicas)) {
      throw Error("metric trace line " + std::to_string(line_no) + ": replicas not integral");
    }
    rec.replicas = static_cast<int>(replicas);
    if (!out.back().services.emplace(ServiceId(f[1]), rec).second) {
      throw Error("metric trace line " + std::to_string(line_no) + ": duplicate service row");
    }
  }
  for (const auto& snap : out) validate(snap);
  return out;
}

void attach_edge_latencies(MetricSnapshot& snapshot, const ServiceGraph& graph) {
  for (const auto& e : graph.edges()) {
    const auto& callee = graph.id(e.callee);
    snapshot.edge_p90[{graph.id(e.caller), callee}] = snapshot.at(callee).p90_latency;
  }
}

MetricWindow load_metric_window(std::istream& in, const ServiceGraph& graph, double interval,
                                double retention) {
  auto snapshots = read_metric_trace(in);
  MetricWindow window(interval, retention);
  for (auto& snap : snapshots) {
    for (const auto& id : graph.services()) snap.at(id);
    attach_edge_latencies(snap, graph);
    window.append(std::move(snap));
  }
  return window;
}

}  // namespace pbscale::metrics
