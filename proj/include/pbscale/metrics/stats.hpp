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

#include <span>

namespace pbscale::metrics {

/// Nearest-rank percentile: the ceil(q*n)-th smallest sample (1-based).
/// Throws on an empty series or q outside (0, 1].
double percentile(std::span<const double> samples, double q);

/// P90 tail latency of a batch of samples.
inline double p90(std::span<const double> samples) { return percentile(samples, 0.9); }

double mean(std::span<const double> xs);

/// Unbiased sample variance (n - 1 denominator).
double sample_variance(std::span<const double> xs);

/// Sample Pearson correlation. A zero-variance input has no linear
/// association signal and yields 0.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace pbscale::metrics
