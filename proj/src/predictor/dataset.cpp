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

#include "pbscale/predictor/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <istream>
#include <ostream>

#include "pbscale/error.hpp"
#include "pbscale/metrics/trace_csv.hpp"
#include "pbscale/random.hpp"
#include "pbscale/sim/simulator.hpp"
#include "pbscale/sim/workload.hpp"

namespace pbscale::predictor {

std::vector<double> features(std::span<const int> replicas, std::span<const double> workloads) {
  std::vector<double> x;
  x.reserve(replicas.size() + workloads.size());
  for (int r : replicas) x.push_back(static_cast<double>(r));
  x.insert(x.end(), workloads.begin(), workloads.end());
  return x;
}

std::size_t Dataset::count(int label) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [label](const TrainingSample& s) { return s.label == label; }));
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  for (const auto& s : services) names.push_back("r_" + s.str());
  for (const auto& s : services) names.push_back("w_" + s.str());
  return names;
}

std::vector<double> Dataset::row(std::size_t i) const {
  const auto& s = samples.at(i);
  return features(s.replicas, s.workloads);
}

void Dataset::validate() const {
  for (const auto& s : samples) {
    if (s.replicas.size() != services.size() || s.workloads.size() != services.size()) {
      throw Error("dataset sample dimensionality does not match the service list");
    }
    if (s.label != kViolation && s.label != kNoViolation) throw Error("labels must be 0 or 1");
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  data.validate();
  for (const auto& name : data.feature_names()) out << name << ',';
  out << "label\n";
  for (const auto& s : data.samples) {
    for (int r : s.replicas) out << r << ',';
    for (double w : s.workloads) out << metrics::format_number(w) << ',';
    out << s.label << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty dataset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = metrics::split_csv_line(line);
  if (header.size() < 3 || header.size() % 2 == 0 || header.back() != "label") {
    throw Error("dataset header must be r_<svc>...,w_<svc>...,label");
  }
  const std::size_t n = (header.size() - 1) / 2;
  Dataset data;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = header[i];
    const auto& w = header[n + i];
    if (r.rfind("r_", 0) != 0 || w.rfind("w_", 0) != 0 || r.substr(2) != w.substr(2)) {
      throw Error("dataset header columns must pair r_<svc> with w_<svc>");
    }
    data.services.emplace_back(r.substr(2));
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = metrics::split_csv_line(line);
    if (f.size() != header.size()) throw Error("dataset row has the wrong number of fields");
    TrainingSample s;
    for (std::size_t i = 0; i < n; ++i) {
      s.replicas.push_back(static_cast<int>(metrics::parse_number(f[i])));
    }
    for (std::size_t i = 0; i < n; ++i) s.workloads.push_back(metrics::parse_number(f[n + i]));
    s.label = static_cast<int>(metrics::parse_number(f.back()));
    data.samples.push_back(std::move(s));
  }
  data.validate();
  return data;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("test fraction must be in (0, 1)");
  }
  Dataset train{data.services, {}};
  Dataset test{data.services, {}};
  std::mt19937_64 rng(seed);
  for (int label : {kViolation, kNoViolation}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.samples[i].label == label) idx.push_back(i);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_test =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_test ? test : train).samples.push_back(data.samples[idx[k]]);
    }
  }
  return {std::move(train), std::move(test)};
}

ReplicaPolicy random_policy(int hold_ticks) {
  if (hold_ticks < 1) throw Error("hold_ticks must be >= 1");
  struct Memory {
    int episode = -1;
    int ticks = 0;
  };
  auto memory = std::make_shared<Memory>();
  return [memory, hold_ticks](const sim::ClusterState& state, const metrics::MetricWindow&,
                              PolicyContext& ctx) {
    if (memory->episode != ctx.episode) {
      memory->episode = ctx.episode;
      memory->ticks = 0;
    }
    if (memory->ticks++ % hold_ticks != 0) return state;
    auto& rng = *ctx.rng;
    std::uniform_int_distribution<int> move(-1, 1);
    std::map<ServiceId, int> strategy;
    for (const auto& s : state.model().specs()) {
      strategy[s.id] = std::clamp(state.replicas(s.id) + move(rng), 1, s.max_replicas);
    }
    return sim::apply_scaling(state, strategy);
  };
}

ReplicaPolicy jittered(ReplicaPolicy base, int spread, int hold_ticks) {
  if (spread < 0) throw Error("spread must be >= 0");
  if (hold_ticks < 1) throw Error("hold_ticks must be >= 1");
  auto ticks = std::make_shared<int>(0);
  return [base = std::move(base), spread, hold_ticks, ticks](const sim::ClusterState& state,
                                                             const metrics::MetricWindow& window,
                                                             PolicyContext& ctx) {
    auto next = base(state, window, ctx);
    if (++*ticks % hold_ticks != 0) return next;
    std::uniform_int_distribution<int> move(-spread, spread);
    std::map<ServiceId, int> strategy;
    for (const auto& s : next.model().specs()) {
      strategy[s.id] = std::clamp(next.replicas(s.id) + move(*ctx.rng), 1, s.max_replicas);
    }
    return sim::apply_scaling(next, strategy);
  };
}

ReplicaPolicy alternate_policies(std::vector<ReplicaPolicy> policies) {
  if (policies.empty()) throw Error("need at least one policy");
  return [policies = std::move(policies)](const sim::ClusterState& state,
                                          const metrics::MetricWindow& window,
                                          PolicyContext& ctx) {
    const auto k = static_cast<std::size_t>(ctx.episode) % policies.size();
    return policies[k](state, window, ctx);
  };
}

Dataset generate_dataset(const sim::Scenario& scenario, int episodes, const ReplicaPolicy& policy,
                         std::uint64_t seed, const DatasetOptions& options) {
  if (episodes < 1) throw Error("episodes must be >= 1");
  if (!scenario.model) throw Error("scenario has no cluster model");
  if (!(options.min_base_rps > 0.0 && options.max_base_rps >= options.min_base_rps)) {
    throw Error("invalid dataset workload range");
  }
  static constexpr sim::WorkloadPattern kPatterns[] = {
      sim::WorkloadPattern::single_peak, sim::WorkloadPattern::multi_peak,
      sim::WorkloadPattern::rising, sim::WorkloadPattern::dropping,
      sim::WorkloadPattern::diurnal};

  const auto& model = *scenario.model;
  Dataset data;
  data.services = model.graph().services();
  std::mt19937_64 rng(seed);
  for (int ep = 0; ep < episodes; ++ep) {
    const auto ep_seed = derive_seed(seed, {static_cast<std::uint64_t>(ep)});
    std::mt19937_64 ep_rng(ep_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto pattern = kPatterns[static_cast<std::size_t>(unit(ep_rng) * 5.0) % 5];
    const double base = options.min_base_rps + unit(ep_rng) * (options.max_base_rps - options.min_base_rps);
    const double amp = unit(ep_rng) * options.max_amplitude;
    const auto trace = sim::generate_workload(pattern, options.episode_duration, base, amp,
                                              ep_seed, scenario.interval);

    sim::ClusterState state(scenario.model);
    metrics::MetricWindow window(scenario.interval);
    PolicyContext ctx{ep, 0.0, &rng};
    for (std::size_t k = 0; k < trace.values.size(); ++k) {
      const double t = static_cast<double>(k) * scenario.interval;
      ctx.t = t;
      state = policy(state, window, ctx);
      const auto res = sim::step(state, trace.values[k], t, ep_seed);
      TrainingSample sample;
      sample.replicas = state.replica_vector();
      for (const auto& id : data.services) {
        sample.workloads.push_back(res.snapshot.at(id).workload);
      }
      sample.label = res.entry_latency > scenario.slo ? kViolation : kNoViolation;
      data.samples.push_back(std::move(sample));
      window.append(res.snapshot);
    }
  }
  return data;
}

}  // namespace pbscale::predictor
