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

namespace pbscale::controller {

struct PriceSchedule {
  double cpu_price = 0.00003334;  // $ per vCPU-second
  double mem_price = 0.00001389;  // $ per GB-second
};

/// Sum over ticks of (cpu * cpu_price + mem * mem_price) * tick_seconds.
double cost(std::span<const double> cpu, std::span<const double> mem, double tick_seconds,
            const PriceSchedule& prices = {});

}  // namespace pbscale::controller
