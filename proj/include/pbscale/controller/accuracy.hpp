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
#include <vector>

#include "pbscale/analysis/toporank.hpp"

namespace pbscale::controller {

/// One localization case: the produced ranking and the true bottlenecks.
struct RcaOutcome {
  std::vector<metrics::ServiceId> ranking;
  std::vector<metrics::ServiceId> truth;
};

/// Mean over cases of |top-k ∩ truth| / min(k, |truth|).
double ac_at_k(std::span<const RcaOutcome> cases, int k);
/// Mean of ac_at_k for j = 1..k.
double avg_at_k(std::span<const RcaOutcome> cases, int k);

}  // namespace pbscale::controller
