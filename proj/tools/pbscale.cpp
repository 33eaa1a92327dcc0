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

// pbscale command-line entry point.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbscale/analysis/detection.hpp"
#include "pbscale/analysis/toporank.hpp"
#include "pbscale/controller/config.hpp"
#include "pbscale/controller/controller.hpp"
#include "pbscale/controller/experiment.hpp"
#include "pbscale/controller/rca_benchmark.hpp"
#include "pbscale/error.hpp"
#include "pbscale/metrics/trace_csv.hpp"
#include "pbscale/optimizer/decision.hpp"
#include "pbscale/predictor/forest.hpp"
#include "pbscale/random.hpp"
#include "pbscale/sim/scenario.hpp"
#include "pbscale/sim/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pbscale;

namespace {

struct Common {
  std::string scenario;
  std::string trace;
  std::string out = "out";
  std::string model;
  std::uint64_t seed = 1;
};

/// Controller flags; unset ones leave the scenario file's values alone.
struct Overrides {
  std::optional<double> slo, alpha, beta, cl, sigma, delta, lambda;
  std::optional<int> gamma, k, c_max;
};

void add_overrides(CLI::App* app, Overrides& o) {
  const controller::ControllerConfig d;
  app->add_option("--slo", o.slo, "End-to-end P90 SLO in ms (default: scenario slo_ms)");
  app->add_option("--alpha", o.alpha, "Detection tolerance alpha")->default_str(std::to_string(d.alpha));
  app->add_option("--beta", o.beta, "Redundancy factor beta")->default_str(std::to_string(d.beta));
  app->add_option("--cl", o.cl, "Redundancy significance level")->default_str(std::to_string(d.cl));
  app->add_option("--sigma", o.sigma, "Potential decay sigma")->default_str(std::to_string(d.sigma));
  app->add_option("--delta", o.delta, "PageRank restart probability")->default_str(std::to_string(d.delta));
  app->add_option("--gamma", o.gamma, "Max replicas removed per service")->default_str(std::to_string(d.gamma));
  app->add_option("--lambda", o.lambda, "SLO weight in the fitness")->default_str(std::to_string(d.lambda));
  app->add_option("--k", o.k, "Bottlenecks optimized per scale-up")->default_str(std::to_string(d.k));
  app->add_option("--c-max", o.c_max, "Replica ceiling per service")->default_str(std::to_string(d.c_max));
}

controller::ControllerConfig apply(controller::ControllerConfig c, const Overrides& o) {
  if (o.slo) c.slo = *o.slo;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.beta) c.beta = *o.beta;
  if (o.cl) c.cl = *o.cl;
  if (o.sigma) c.sigma = *o.sigma;
  if (o.delta) c.delta = *o.delta;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.lambda) c.lambda = *o.lambda;
  if (o.k) c.k = *o.k;
  if (o.c_max) c.c_max = *o.c_max;
  c.validate();
  return c;
}

sim::Scenario load(const std::string& path) {
  if (path == "online-boutique") return sim::online_boutique();
  return sim::load_scenario(path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

void write_manifest(const fs::path& dir, const std::string& sub, const Common& c,
                    const std::vector<std::string>& argv) {
  json m;
  m["subcommand"] = sub;
  m["config"] = c.scenario;
  m["trace"] = c.trace;
  m["model"] = c.model;
  m["seed"] = c.seed;
  m["out"] = c.out;
  m["version"] = PBSCALE_VERSION;
  m["argv"] = argv;
  write_json(dir / "manifest.json", m);
}

sim::WorkloadTrace workload_for(const sim::Scenario& s, const Common& c,
                                const std::string& pattern) {
  if (!c.trace.empty()) {
    std::ifstream in(c.trace);
    if (!in) throw Error("cannot read " + c.trace);
    return sim::read_workload_csv(in);
  }
  if (pattern.empty()) return s.make_trace(c.seed);
  return sim::generate_workload(sim::parse_pattern(pattern), s.workload.duration,
                                s.workload.base_rps, s.workload.amplitude, c.seed, s.interval);
}

int cmd_simulate(const Common& c, const std::string& pattern) {
  const auto s = load(c.scenario);
  const auto trace = workload_for(s, c, pattern);
  auto state = s.initial_state();
  std::vector<metrics::MetricSnapshot> snaps;
  for (std::size_t k = 0; k < trace.values.size(); ++k) {
    const double t = static_cast<double>(k) * s.interval;
    snaps.push_back(sim::step(state, trace.values[k], t, c.seed).snapshot);
  }
  auto m = open_out(fs::path(c.out) / "metrics.csv");
  metrics::write_metric_trace(m, snaps);
  auto w = open_out(fs::path(c.out) / "workload.csv");
  sim::write_workload_csv(w, trace);
  std::cout << "wrote " << snaps.size() << " snapshots to " << c.out << "/metrics.csv\n";
  return 0;
}

int cmd_localize(const Common& c, const Overrides& o) {
  const auto s = load(c.scenario);
  const auto config = apply(controller::config_for(s), o);
  if (c.trace.empty()) throw Error("--trace (metric trace CSV) is required");
  std::ifstream in(c.trace);
  if (!in) throw Error("cannot read " + c.trace);
  const auto& graph = s.model->graph();
  const auto window = metrics::load_metric_window(in, graph, s.interval);
  const auto abnormal = controller::inspect(graph, window, config);
  json j;
  j["abnormal"] = json::object();
  for (const auto& [id, n] : abnormal.violation_counts) j["abnormal"][id.str()] = n;
  j["ranking"] = json::array();
  if (!abnormal.empty()) {
    const auto ranking = analysis::toporank(graph, window, abnormal, config.toporank_options());
    for (const auto& e : ranking.entries) {
      j["ranking"].push_back(json{{"service", e.id.str()}, {"score", e.score}});
      std::cout << e.id.str() << ' ' << e.score << '\n';
    }
  } else {
    std::cout << "no SLO violations in the last inspection interval\n";
  }
  write_json(fs::path(c.out) / "ranking.json", j);
  return 0;
}

int cmd_train(const Common& c, int episodes, const std::string& dataset_path) {
  const auto s = load(c.scenario);
  const auto config = controller::config_for(s);
  predictor::Dataset data;
  if (!dataset_path.empty()) {
    std::ifstream in(dataset_path);
    if (!in) throw Error("cannot read " + dataset_path);
    data = predictor::read_dataset_csv(in);
  } else {
    controller::TrainingOptions opts;
    opts.episodes = episodes;
    data = controller::default_dataset(s, config, derive_seed(c.seed, {0}), opts);
    auto out = open_out(fs::path(c.out) / "dataset.csv");
    predictor::write_dataset_csv(out, data);
  }
  const auto [train, test] = predictor::stratified_split(data, 0.2, derive_seed(c.seed, {1}));
  const auto forest = predictor::train_forest(train, {}, derive_seed(c.seed, {2}));
  predictor::TreeParams tp;
  const auto tree = predictor::train_tree(predictor::to_matrix(train), tp);
  if (tree.degenerate()) std::cerr << "warning: training data has a single class\n";
  predictor::save_model((fs::path(c.out) / "model.json").string(), forest);
  const auto fe = predictor::evaluate(forest, test);
  const auto te = predictor::evaluate(tree, test);
  auto ev = [](const predictor::Evaluation& e) {
    return json{{"precision", e.precision()}, {"recall", e.recall()}, {"accuracy", e.accuracy()},
                {"tp", e.tp}, {"fp", e.fp}, {"tn", e.tn}, {"fn", e.fn}};
  };
  write_json(fs::path(c.out) / "evaluation.json",
             {{"samples", data.size()}, {"positives", data.count(predictor::kNoViolation)},
              {"random_forest", ev(fe)}, {"decision_tree", ev(te)}});
  std::cout << "samples " << data.size() << "  forest precision " << fe.precision() << " recall "
            << fe.recall() << "  tree precision " << te.precision() << " recall " << te.recall()
            << '\n';
  return 0;
}

int cmd_optimize(const Common& c, const Overrides& o, const std::string& state_path,
                 const std::vector<std::string>& pbs, const std::string& direction) {
  const auto s = load(c.scenario);
  auto config = apply(controller::config_for(s), o);
  if (c.model.empty()) throw Error("--model is required");
  const auto model = predictor::load_model(c.model);
  std::ifstream in(state_path);
  if (!in) throw Error("cannot read " + state_path);
  json st;
  try {
    in >> st;
  } catch (const json::exception& e) {
    throw Error(std::string("cannot parse state: ") + e.what());
  }
  const auto& services = s.model->graph().services();
  std::vector<int> replicas;
  std::vector<double> workloads;
  for (const auto& id : services) {
    replicas.push_back(st.at("replicas").value(id.str(), 1));
    workloads.push_back(st.at("workloads").value(id.str(), 0.0));
  }
  std::vector<metrics::ServiceId> targets(pbs.begin(), pbs.end());
  auto params = config.decision_params();
  params.ga.seed = c.seed;
  const auto d = optimizer::decide(
      targets, optimizer::parse_direction(direction), services, replicas, workloads,
      [&](std::span<const int> r, std::span<const double> w) { return model.predict(r, w); },
      params);
  json j;
  j["direction"] = std::string(optimizer::to_string(d.direction));
  j["targets"] = json::array();
  for (const auto& id : d.targets) j["targets"].push_back(id.str());
  j["dropped"] = json::array();
  for (const auto& id : d.dropped) j["dropped"].push_back(id.str());
  j["replicas"] = json::object();
  for (const auto& [id, n] : d.replicas) j["replicas"][id.str()] = n;
  j["best_fitness"] = d.ga.best_fitness;
  write_json(fs::path(c.out) / "decision.json", j);
  auto log = open_out(fs::path(c.out) / "fitness.csv");
  log << "generation,best,mean\n";
  for (const auto& g : d.ga.history) {
    log << g.generation << ',' << metrics::format_number(g.best) << ','
        << metrics::format_number(g.mean) << '\n';
  }
  std::cout << j["replicas"].dump() << '\n';
  return 0;
}

int cmd_run(const Common& c, const Overrides& o, const std::string& policy,
            const std::string& pattern) {
  const auto s = load(c.scenario);
  controller::ExperimentOptions opts;
  opts.config = apply(controller::config_for(s), o);
  std::optional<predictor::RandomForest> model;
  if (!c.model.empty()) {
    model = predictor::load_model(c.model);
    opts.model = &*model;
  }
  const auto trace = workload_for(s, c, pattern);
  const auto report =
      controller::run_experiment(s, controller::parse_policy(policy), trace, c.seed, opts);
  write_json(fs::path(c.out) / "report.json", report.to_json());
  auto csv = open_out(fs::path(c.out) / "ticks.csv");
  report.write_csv(csv);
  std::cout << policy << ": violation_rate " << report.violation_rate << "% cost $"
            << report.cost << '\n';
  return 0;
}

int cmd_rca(const Common& c, const Overrides& o, controller::RcaOptions opts) {
  const auto s = load(c.scenario);
  const auto config = apply(controller::config_for(s), o);
  const auto summary = controller::rca_benchmark(s, config, c.seed, opts);
  write_json(fs::path(c.out) / "rca.json", summary.to_json());
  std::cout << "toporank AC@1 " << summary.ac1 << " Avg@5 " << summary.avg5
            << " | uniform AC@1 " << summary.ablation_ac1 << " Avg@5 " << summary.ablation_avg5
            << '\n';
  return 0;
}

int cmd_report(const Common& c, const std::vector<std::string>& inputs) {
  auto out = open_out(fs::path(c.out) / "summary.csv");
  out << "scenario,policy,seed,violation_rate,cost,mean_replicas\n";
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    json r;
    try {
      in >> r;
    } catch (const json::exception& e) {
      throw Error("cannot parse " + path + ": " + e.what());
    }
    std::ostringstream line;
    line << r.at("scenario").get<std::string>() << ',' << r.at("policy").get<std::string>() << ','
         << r.at("seed").get<std::uint64_t>() << ','
         << metrics::format_number(r.at("violation_rate").get<double>()) << ','
         << metrics::format_number(r.at("cost").get<double>()) << ','
         << metrics::format_number(r.at("mean_replicas").get<double>());
    out << line.str() << '\n';
    std::cout << line.str() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bottleneck-aware microservice autoscaling toolkit"};
  app.set_version_flag("--version", PBSCALE_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string defaults;
  {
    const controller::ControllerConfig d;
    auto f = [](double x) { return metrics::format_number(x); };
    defaults = ("Controller defaults: alpha=" + f(d.alpha) + " beta=" + f(d.beta) + " cl=" + f(d.cl) +
               " sigma=" + f(d.sigma) + " delta=" + f(d.delta) + " gamma=" + std::to_string(d.gamma) +
               " k=" + std::to_string(d.k) + " c_max=" + std::to_string(d.c_max) +
               " lambda=" + f(d.lambda) +
               "\nA flag overrides the scenario's \"controller\" section, which overrides the "
               "built-in default.");
    app.footer(defaults);
  }

  Common common;
  Overrides overrides;
  std::string policy = "pbscale";
  std::string pattern;
  std::string state_path;
  std::string direction = "scale-up";
  std::string dataset_path;
  std::vector<std::string> pbs;
  std::vector<std::string> inputs;
  int episodes = 30;
  controller::RcaOptions rca_opts;

  auto base = [&](CLI::App* sub, bool scenario_required) {
    auto* opt = sub->add_option("--scenario", common.scenario,
                                "Scenario JSON file, or 'online-boutique' for the built-in one");
    if (scenario_required) opt->required();
    sub->add_option("--seed", common.seed, "Seed for every random stream");
    sub->add_option("--out", common.out, "Output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate a workload and dump metrics");
  base(simulate, true);
  simulate->add_option("--trace", common.trace, "Workload CSV (timestamp,rps)");
  simulate->add_option("--pattern", pattern, "Generated workload pattern");

  auto* localize = app.add_subcommand("localize", "Rank bottlenecks from a metric trace");
  base(localize, true);
  localize->add_option("--trace", common.trace, "Metric trace CSV")->required();
  add_overrides(localize, overrides);

  auto* train = app.add_subcommand("train-predictor", "Generate data and train the SLO predictor");
  base(train, true);
  train->add_option("--episodes", episodes, "Simulated episodes of 300 s");
  train->add_option("--dataset", dataset_path, "Train on an existing dataset CSV instead");

  auto* optimize = app.add_subcommand("optimize", "Run the replica optimizer once");
  base(optimize, true);
  optimize->add_option("--state", state_path, "JSON with replicas and workloads maps")->required();
  optimize->add_option("--pbs", pbs, "Ranked services to optimize")->required()->delimiter(',');
  optimize->add_option("--direction", direction, "scale-up or scale-down");
  optimize->add_option("--model", common.model, "Predictor model JSON")->required();
  add_overrides(optimize, overrides);

  auto* run = app.add_subcommand("run", "Run a closed-loop experiment");
  base(run, true);
  run->add_option("--policy", policy, "none, khpa or pbscale");
  run->add_option("--trace", common.trace, "Workload CSV (timestamp,rps)");
  run->add_option("--pattern", pattern, "Generated workload pattern");
  run->add_option("--model", common.model, "Predictor model JSON (trained on the fly if absent)");
  add_overrides(run, overrides);

  auto* rca = app.add_subcommand("evaluate-rca", "Fault-injection localization benchmark");
  base(rca, true);
  rca->add_option("--cases-per-kind", rca_opts.cases_per_kind, "Cases per fault kind");
  rca->add_option("--min-rps", rca_opts.min_rps, "Lowest per-case background load");
  rca->add_option("--max-rps", rca_opts.max_rps, "Highest per-case background load");
  rca->add_option("--jitter", rca_opts.jitter, "Relative per-tick load jitter");
  rca->add_option("--min-util", rca_opts.min_util, "Lowest per-service target utilization");
  rca->add_option("--max-util", rca_opts.max_util, "Highest per-service target utilization (0 keeps scenario replicas)");
  rca->add_option("--delay", rca_opts.delay, "Seconds after fault onset before localizing");
  add_overrides(rca, overrides);

  auto* report = app.add_subcommand("report", "Summarize run reports into one CSV");
  base(report, false);
  report->add_option("inputs", inputs, "report.json files")->required();

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->footer(defaults);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    fs::create_directories(common.out);
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    int rc = 0;
    if (name == "simulate") rc = cmd_simulate(common, pattern);
    if (name == "localize") rc = cmd_localize(common, overrides);
    if (name == "train-predictor") rc = cmd_train(common, episodes, dataset_path);
    if (name == "optimize") rc = cmd_optimize(common, overrides, state_path, pbs, direction);
    if (name == "run") rc = cmd_run(common, overrides, policy, pattern);
    if (name == "evaluate-rca") rc = cmd_rca(common, overrides, rca_opts);
    if (name == "report") rc = cmd_report(common, inputs);
    write_manifest(common.out, name, common, args);
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
