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

#include "pbscale/controller/cost.hpp"
#include "pbscale/error.hpp"

namespace pbscale::controller {

double cost(std::span<const double> cpu, std::span<const double> mem, double tick_seconds,
            const PriceSchedule& prices) {
  if (cpu.size() != mem.size()) throw Error("cpu and memory series differ in length");
  if (!(tick_seconds >= 0.0)) throw Error("tick length must be >= 0");
  if (prices.cpu_price < 0.0 || prices.mem_price < 0.0) throw Error("prices must be >= 0");
  double total = 0.0;
  for (std::size_t i = 0; i < cpu.size(); ++i) {
    total += (cpu[i] * prices.cpu_price + mem[i] * prices.mem_price) * tick_seconds;
  }
  return total;
}

}  // namespace pbscale::controller
