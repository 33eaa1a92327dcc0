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

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace pbscale::sim {

enum class WorkloadPattern { single_peak, multi_peak, rising, dropping, diurnal, constant };

WorkloadPattern parse_pattern(std::string_view name);
std::string_view to_string(WorkloadPattern pattern);

/// Entry request rate, one value per tick.
struct WorkloadTrace {
  WorkloadPattern pattern = WorkloadPattern::constant;
  double duration = 0.0;  // seconds
  double tick = 5.0;      // seconds
  std::vector<double> values;
  std::uint64_t seed = 0;

  double at(double t) const;
};

/// Synthetic entry workload. Peaks are Gaussian bumps over `base_rps` with
/// height `amplitude`; ramps move linearly by `amplitude` over the trace;
/// diurnal is one sinusoidal day compressed into the duration. Every
/// pattern but `constant` carries bounded uniform noise of +-3% of base.
WorkloadTrace generate_workload(WorkloadPattern pattern, double duration, double base_rps,
                                double amplitude, std::uint64_t seed, double tick = 5.0);

// CSV `timestamp,rps`.
void write_workload_csv(std::ostream& out, const WorkloadTrace& trace);
WorkloadTrace read_workload_csv(std::istream& in);

}  // namespace pbscale::sim
