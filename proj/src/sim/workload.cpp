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

#include "pbscale/sim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "pbscale/error.hpp"
#include "pbscale/metrics/trace_csv.hpp"

namespace pbscale::sim {

namespace {

constexpr double kNoiseFraction = 0.03;
constexpr double kPeakWidth = 0.08;  // std-dev of a bump, as a fraction of the trace

double bump(double x, double centre, double width) {
  const double z = (x - centre) / width;
  return std::exp(-0.5 * z * z);
}

}  // namespace

WorkloadPattern parse_pattern(std::string_view name) {
  if (name == "single-peak") return WorkloadPattern::single_peak;
  if (name == "multi-peak") return WorkloadPattern::multi_peak;
  if (name == "rising") return WorkloadPattern::rising;
  if (name == "dropping") return WorkloadPattern::dropping;
  if (name == "diurnal") return WorkloadPattern::diurnal;
  if (name == "constant") return WorkloadPattern::constant;
  throw Error("unknown workload pattern '" + std::string(name) + "'");
}

std::string_view to_string(WorkloadPattern pattern) {
  switch (pattern) {
    case WorkloadPattern::single_peak: return "single-peak";
    case WorkloadPattern::multi_peak: return "multi-peak";
    case WorkloadPattern::rising: return "rising";
    case WorkloadPattern::dropping: return "dropping";
    case WorkloadPattern::diurnal: return "diurnal";
    case WorkloadPattern::constant: return "constant";
  }
  return "?";
}

double WorkloadTrace::at(double t) const {
  if (values.empty()) throw Error("empty workload trace");
  const auto i = static_cast<std::size_t>(std::max(0.0, std::floor(t / tick + 1e-9)));
  return values[std::min(i, values.size() - 1)];
}

WorkloadTrace generate_workload(WorkloadPattern pattern, double duration, double base_rps,
                                double amplitude, std::uint64_t seed, double tick) {
  if (!(duration > 0.0)) throw Error("workload duration must be positive");
  if (!(base_rps > 0.0)) throw Error("base_rps must be positive");
  if (!(amplitude >= 0.0)) throw Error("amplitude must be non-negative");
  if (!(tick > 0.0)) throw Error("tick must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Shape parameters are drawn first so they do not depend on the length.
  double c1 = 0.5, c2 = 0.7, h2 = 1.0;
  if (pattern == WorkloadPattern::single_peak) {
    c1 = 0.45 + 0.1 * unit(rng);
  } else if (pattern == WorkloadPattern::multi_peak) {
    c1 = 0.2 + 0.1 * unit(rng);
    c2 = 0.65 + 0.1 * unit(rng);
    h2 = 0.7 + 0.3 * unit(rng);
  }

  const auto n = static_cast<std::size_t>(std::llround(duration / tick));
  if (n == 0) throw Error("duration shorter than one tick");
  WorkloadTrace trace{pattern, static_cast<double>(n) * tick, tick, {}, seed};
  trace.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double v = base_rps;
    switch (pattern) {
      case WorkloadPattern::constant: break;
      case WorkloadPattern::single_peak: v += amplitude * bump(x, c1, kPeakWidth); break;
      case WorkloadPattern::multi_peak:
        v += amplitude * bump(x, c1, kPeakWidth) + amplitude * h2 * bump(x, c2, kPeakWidth);
        break;
      case WorkloadPattern::rising: v += amplitude * x; break;
      case WorkloadPattern::dropping: v += amplitude * (1.0 - x); break;
      case WorkloadPattern::diurnal:
        v += amplitude * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * x));
        break;
    }
    if (pattern != WorkloadPattern::constant) {
      v += base_rps * kNoiseFraction * (2.0 * unit(rng) - 1.0);
    }
    trace.values.push_back(std::max(0.0, v));
  }
  return trace;
}

void write_workload_csv(std::ostream& out, const WorkloadTrace& trace) {
  out << "timestamp,rps\n";
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    out << metrics::format_number(static_cast<double>(i) * trace.tick) << ','
        << metrics::format_number(trace.values[i]) << '\n';
  }
}

WorkloadTrace read_workload_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty workload trace");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,rps") throw Error("workload trace must start with 'timestamp,rps'");
  std::vector<double> times;
  WorkloadTrace trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = metrics::split_csv_line(line);
    if (f.size() != 2) throw Error("workload trace rows need 2 fields");
    times.push_back(metrics::parse_number(f[0]));
    const double rps = metrics::parse_number(f[1]);
    if (!(rps >= 0.0)) throw Error("workload values must be non-negative");
    trace.values.push_back(rps);
  }
  if (trace.values.empty()) throw Error("workload trace has no rows");
  trace.tick = times.size() > 1 ? times[1] - times[0] : 5.0;
  if (!(trace.tick > 0.0)) throw Error("workload timestamps must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - trace.tick) > 1e-6 * trace.tick) {
      throw Error("workload timestamps must be evenly spaced");
    }
  }
  trace.duration = static_cast<double>(trace.values.size()) * trace.tick;
  return trace;
}

}  // namespace pbscale::sim
