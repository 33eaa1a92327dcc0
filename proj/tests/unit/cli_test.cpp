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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result pbscale(const std::string& args) {
  const std::string cmd = std::string(PBSCALE_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pbscale_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}

const std::string kScenario = std::string(PBSCALE_SCENARIO_DIR) + "/online_boutique.json";

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(pbscale("").code == 2);
  CHECK(pbscale("frobnicate").code == 2);
  CHECK(pbscale("run").code == 2);
  CHECK(pbscale("run --scenario online-boutique --alpha high").code == 2);
  CHECK(pbscale("run --scenario online-boutique --no-such-flag").code == 2);
}

TEST_CASE("runtime errors exit with 1") {
  const auto out = scratch("runtime");
  CHECK(pbscale("run --scenario /no/such/file.json --out " + out.string()).code == 1);
  CHECK(pbscale("run --scenario online-boutique --policy khpa --alpha 5 --out " + out.string())
            .code == 1);
  CHECK(pbscale("run --scenario online-boutique --policy magic --out " + out.string()).code == 1);
}

TEST_CASE("help lists the controller defaults") {
  const auto r = pbscale("--help");
  CHECK(r.code == 0);
  for (const char* s : {"alpha=0.2", "beta=0.9", "cl=0.05", "sigma=1", "delta=0.15", "gamma=2",
                        "k=2", "c_max=8"}) {
    CAPTURE(s);
    CHECK(r.output.find(s) != std::string::npos);
  }
  for (const char* sub : {"simulate", "localize", "train-predictor", "optimize", "run",
                          "evaluate-rca", "report"}) {
    CHECK(r.output.find(sub) != std::string::npos);
    const auto h = pbscale(std::string(sub) + " --help");
    CHECK(h.code == 0);
    CHECK(h.output.find("alpha=0.2 beta=0.9 cl=0.05 sigma=1 delta=0.15 gamma=2 k=2 c_max=8") !=
          std::string::npos);
  }
}

TEST_CASE("simulate, localize and report write a manifest") {
  const auto sim = scratch("simulate");
  REQUIRE(pbscale("simulate --scenario " + kScenario + " --pattern single-peak --seed 4 --out " +
                  sim.string())
              .code == 0);
  CHECK(fs::exists(sim / "metrics.csv"));
  const auto manifest = read_json(sim / "manifest.json");
  CHECK(manifest.at("subcommand") == "simulate");
  CHECK(manifest.at("seed") == 4);

  const auto loc = scratch("localize");
  const auto r = pbscale("localize --scenario " + kScenario + " --trace " +
                         (sim / "metrics.csv").string() + " --out " + loc.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(loc / "manifest.json"));

  const auto run = scratch("run");
  REQUIRE(pbscale("run --scenario online-boutique --policy khpa --pattern rising --out " +
                  run.string())
              .code == 0);
  CHECK(fs::exists(run / "report.json"));
  CHECK(fs::exists(run / "manifest.json"));
  const auto rep = scratch("report");
  CHECK(pbscale("report --out " + rep.string() + " " + (run / "report.json").string()).code == 0);
  CHECK(fs::exists(rep / "manifest.json"));
}

TEST_CASE("train-predictor and optimize") {
  const auto train = scratch("train");
  REQUIRE(pbscale("train-predictor --scenario online-boutique --episodes 4 --out " +
                  train.string())
              .code == 0);
  REQUIRE(fs::exists(train / "model.json"));
  CHECK(fs::exists(train / "manifest.json"));

  const auto opt = scratch("optimize");
  fs::create_directories(opt);
  json state;
  state["replicas"] = json::object();
  state["workloads"] = json::object();
  for (const char* s : {"frontend", "productcatalog", "currency", "cart", "recommendation", "ad",
                        "shipping", "checkout", "payment", "email"}) {
    state["replicas"][s] = 2;
    state["workloads"][s] = 40.0;
  }
  std::ofstream(opt / "state.json") << state.dump();
  const auto r = pbscale("optimize --scenario online-boutique --state " +
                         (opt / "state.json").string() + " --pbs cart,checkout --model " +
                         (train / "model.json").string() + " --out " + opt.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(opt / "manifest.json"));
  CHECK(pbscale("optimize --scenario online-boutique --state " + (opt / "state.json").string() +
                " --pbs nosuch --model " + (train / "model.json").string() + " --out " +
                opt.string())
            .code == 1);
}

TEST_CASE("flags override the scenario file, which overrides defaults") {
  auto doc = read_json(kScenario);
  const auto dir = scratch("precedence");
  fs::create_directories(dir);
  doc["controller"] = {{"slo_ms", 420.0}};
  std::ofstream(dir / "scenario.json") << doc.dump();

  auto slo_of = [&](const std::string& extra) {
    const auto out = dir / "out";
    fs::remove_all(out);
    const auto r = pbscale("run --scenario " + (dir / "scenario.json").string() +
                           " --policy khpa --pattern constant --out " + out.string() + extra);
    REQUIRE(r.code == 0);
    return read_json(out / "report.json").at("slo_ms").get<double>();
  };
  CHECK(slo_of("") == 420.0);
  CHECK(slo_of(" --slo 450") == 450.0);

  const auto plain = scratch("plain");
  REQUIRE(pbscale("run --scenario " + kScenario + " --policy khpa --pattern constant --out " +
                  plain.string())
              .code == 0);
  CHECK(read_json(plain / "report.json").at("slo_ms").get<double>() ==
        read_json(kScenario).at("slo_ms").get<double>());
}

TEST_CASE("the same command and seed produce identical files") {
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const auto a = scratch("same_a");
  const auto b = scratch("same_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(pbscale("run --scenario " + kScenario + " --policy pbscale --seed 7 --out " +
                    dir.string())
                .code == 0);
  }
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "ticks.csv") == slurp(b / "ticks.csv"));
}
