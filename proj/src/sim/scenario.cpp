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

#include "pbscale/sim/scenario.hpp"

#include <fstream>

#include "pbscale/error.hpp"

namespace pbscale::sim {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw Error(where + ": missing required field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T optional(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

ClusterState Scenario::initial_state() const {
  ClusterState state(model);
  for (const auto& f : faults) state.add_fault(f);
  return state;
}

WorkloadTrace Scenario::make_trace(std::uint64_t seed) const {
  return generate_workload(workload.pattern, workload.duration, workload.base_rps,
                           workload.amplitude, seed, interval);
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw Error("scenario must be a JSON object");
  Scenario sc;
  sc.document = doc;
  sc.name = optional<std::string>(doc, "name", "scenario", "scenario");
  sc.slo = optional<double>(doc, "slo_ms", 500.0, "scenario");
  sc.interval = optional<double>(doc, "interval_s", 5.0, "scenario");
  sc.startup_lag = optional<double>(doc, "startup_lag_s", 0.0, "scenario");
  if (!(sc.slo > 0.0)) throw Error("scenario: slo_ms must be positive");
  if (!(sc.interval > 0.0)) throw Error("scenario: interval_s must be positive");
  if (!(sc.startup_lag >= 0.0)) throw Error("scenario: startup_lag_s must be >= 0");

  SimOptions opt;
  if (doc.contains("simulation")) {
    const auto& s = doc.at("simulation");
    opt.k_sat = optional<double>(s, "k_sat", opt.k_sat, "simulation");
    opt.epsilon = optional<double>(s, "epsilon", opt.epsilon, "simulation");
    opt.noise = optional<double>(s, "noise", opt.noise, "simulation");
    opt.composition =
        parse_composition(optional<std::string>(s, "composition", "critical-path", "simulation"));
  }

  ServiceGraph graph;
  std::vector<ServiceSpec> specs;
  const auto services = required<json>(doc, "services", "scenario");
  if (!services.is_array() || services.empty()) {
    throw Error("scenario: 'services' must be a non-empty array");
  }
  for (const auto& s : services) {
    ServiceSpec spec;
    spec.id = ServiceId(required<std::string>(s, "name", "service"));
    const std::string where = "service '" + spec.id.str() + "'";
    spec.base_service_time = required<double>(s, "base_service_time_ms", where);
    spec.capacity_per_replica = required<double>(s, "capacity_rps", where);
    spec.cpu_per_replica = optional<double>(s, "cpu_per_replica", spec.cpu_per_replica, where);
    spec.mem_per_replica = optional<double>(s, "mem_per_replica_gb", spec.mem_per_replica, where);
    spec.max_replicas = optional<int>(s, "max_replicas", spec.max_replicas, where);
    spec.initial_replicas = optional<int>(s, "initial_replicas", spec.initial_replicas, where);
    graph.add_service(spec.id);
    specs.push_back(std::move(spec));
  }

  std::map<EdgeKey, double> fanout;
  for (const auto& e : optional<json>(doc, "edges", json::array(), "scenario")) {
    const ServiceId caller(required<std::string>(e, "caller", "edge"));
    const ServiceId callee(required<std::string>(e, "callee", "edge"));
    graph.add_edge(caller, callee);
    fanout[{caller, callee}] = optional<double>(e, "fanout", 1.0, "edge");
  }

  const ServiceId entry(required<std::string>(doc, "entry", "scenario"));
  sc.model = std::make_shared<const ClusterModel>(std::move(graph), std::move(specs),
                                                  std::move(fanout), entry, opt);

  for (const auto& f : optional<json>(doc, "faults", json::array(), "scenario")) {
    FaultInjection fault;
    fault.target = ServiceId(required<std::string>(f, "target", "fault"));
    fault.kind = parse_fault_kind(required<std::string>(f, "kind", "fault"));
    fault.start = required<double>(f, "start_s", "fault");
    fault.end = required<double>(f, "end_s", "fault");
    fault.severity = required<double>(f, "severity", "fault");
    validate(fault);
    sc.model->graph().index_of(fault.target);
    sc.faults.push_back(std::move(fault));
  }

  if (doc.contains("workload")) {
    const auto& w = doc.at("workload");
    sc.workload.pattern = parse_pattern(optional<std::string>(w, "pattern", "single-peak", "workload"));
    sc.workload.duration = optional<double>(w, "duration_s", sc.workload.duration, "workload");
    sc.workload.base_rps = optional<double>(w, "base_rps", sc.workload.base_rps, "workload");
    sc.workload.amplitude = optional<double>(w, "amplitude", sc.workload.amplitude, "workload");
  }
  return sc;
}

json to_json(const Scenario& sc) {
  json doc = sc.document.is_object() ? sc.document : json::object();
  const auto& model = *sc.model;
  doc["name"] = sc.name;
  doc["entry"] = model.entry().str();
  doc["slo_ms"] = sc.slo;
  doc["interval_s"] = sc.interval;
  doc["startup_lag_s"] = sc.startup_lag;
  doc["simulation"] = {{"k_sat", model.options().k_sat},
                       {"epsilon", model.options().epsilon},
                       {"noise", model.options().noise},
                       {"composition", std::string(to_string(model.options().composition))}};
  json services = json::array();
  for (const auto& s : model.specs()) {
    services.push_back({{"name", s.id.str()},
                        {"base_service_time_ms", s.base_service_time},
                        {"capacity_rps", s.capacity_per_replica},
                        {"cpu_per_replica", s.cpu_per_replica},
                        {"mem_per_replica_gb", s.mem_per_replica},
                        {"max_replicas", s.max_replicas},
                        {"initial_replicas", s.initial_replicas}});
  }
  doc["services"] = services;
  json edges = json::array();
  for (const auto& e : model.graph().edges()) {
    edges.push_back({{"caller", model.graph().id(e.caller).str()},
                     {"callee", model.graph().id(e.callee).str()},
                     {"fanout", model.fanout(e.caller, e.callee)}});
  }
  doc["edges"] = edges;
  json faults = json::array();
  for (const auto& f : sc.faults) {
    faults.push_back({{"target", f.target.str()},
                      {"kind", std::string(to_string(f.kind))},
                      {"start_s", f.start},
                      {"end_s", f.end},
                      {"severity", f.severity}});
  }
  doc["faults"] = faults;
  doc["workload"] = {{"pattern", std::string(to_string(sc.workload.pattern))},
                     {"duration_s", sc.workload.duration},
                     {"base_rps", sc.workload.base_rps},
                     {"amplitude", sc.workload.amplitude}};
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("scenario " + path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

Scenario online_boutique() {
  struct Row {
    const char* name;
    double base_ms, capacity, cpu, mem;
  };
  // Capacities are per replica. cart keeps its state in Redis, so its own
  // CPU and memory are small; ad (JVM) and recommendation carry the large
  // resident footprints.
  static constexpr Row kServices[] = {
      {"frontend", 25, 100, 1.0, 0.25},      {"productcatalog", 30, 200, 0.6, 0.25},
      {"currency", 20, 250, 1.0, 0.25},      {"cart", 35, 80, 0.3, 0.25},
      {"recommendation", 45, 50, 1.0, 0.75}, {"ad", 25, 120, 1.0, 0.75},
      {"shipping", 25, 150, 0.25, 0.125},    {"checkout", 20, 40, 0.5, 0.25},
      {"payment", 25, 100, 0.25, 0.125},     {"email", 20, 100, 0.25, 0.25},
  };
  struct Call {
    const char* caller;
    const char* callee;
    double fanout;
  };
  static constexpr Call kCalls[] = {
      {"frontend", "productcatalog", 1.0}, {"frontend", "currency", 1.0},
      {"frontend", "cart", 0.6},           {"frontend", "recommendation", 0.5},
      {"frontend", "ad", 0.5},             {"frontend", "shipping", 0.3},
      {"frontend", "checkout", 0.15},      {"checkout", "productcatalog", 2.0},
      {"checkout", "currency", 2.0},       {"checkout", "cart", 1.0},
      {"checkout", "shipping", 1.0},       {"checkout", "payment", 1.0},
      {"checkout", "email", 1.0},          {"recommendation", "productcatalog", 1.0},
  };

  json doc;
  doc["name"] = "online-boutique";
  doc["entry"] = "frontend";
  doc["slo_ms"] = 500.0;
  doc["interval_s"] = 5.0;
  doc["startup_lag_s"] = 0.0;
  doc["simulation"] = {
      {"k_sat", 10.0}, {"epsilon", 1e-3}, {"noise", 0.05}, {"composition", "critical-path"}};
  doc["services"] = json::array();
  for (const auto& r : kServices) {
    doc["services"].push_back({{"name", r.name},
                               {"base_service_time_ms", r.base_ms},
                               {"capacity_rps", r.capacity},
                               {"cpu_per_replica", r.cpu},
                               {"mem_per_replica_gb", r.mem},
                               {"max_replicas", 8},
                               {"initial_replicas", 1}});
  }
  doc["edges"] = json::array();
  for (const auto& c : kCalls) {
    doc["edges"].push_back({{"caller", c.caller}, {"callee", c.callee}, {"fanout", c.fanout}});
  }
  doc["faults"] = json::array();
  doc["workload"] = {
      {"pattern", "single-peak"}, {"duration_s", 1200.0}, {"base_rps", 50.0}, {"amplitude", 100.0}};
  return scenario_from_json(doc);
}

}  // namespace pbscale::sim
