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
#include <set>

#include "pbscale/controller/accuracy.hpp"
#include "pbscale/error.hpp"

namespace pbscale::controller {

double ac_at_k(std::span<const RcaOutcome> cases, int k) {
  if (k < 1) throw Error("k must be >= 1");
  if (cases.empty()) throw Error("no localization cases");
  double sum = 0.0;
  for (const auto& c : cases) {
    if (c.truth.empty()) throw Error("case without a true bottleneck");
    const std::set<metrics::ServiceId> truth(c.truth.begin(), c.truth.end());
    const auto top = std::min(c.ranking.size(), static_cast<std::size_t>(k));
    int hits = 0;
    for (std::size_t i = 0; i < top; ++i) hits += truth.contains(c.ranking[i]) ? 1 : 0;
    sum += static_cast<double>(hits) /
           static_cast<double>(std::min(static_cast<std::size_t>(k), truth.size()));
  }
  return sum / static_cast<double>(cases.size());
}

double avg_at_k(std::span<const RcaOutcome> cases, int k) {
  if (k < 1) throw Error("k must be >= 1");
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) sum += ac_at_k(cases, j);
  return sum / static_cast<double>(k);
}

}  // namespace pbscale::controller
