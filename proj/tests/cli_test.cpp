// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "crowdmatch/cli.hpp"

using namespace crowdmatch;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "crowdmatch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) {
  return (fs::path(CROWDMATCH_TEST_DATA) / name).string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  Scratch() {
    static std::atomic<int> counter{0};
    dir = fs::temp_directory_path() /
          ("crowdmatch_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"assign"}).code == kExitUsage);
  CHECK(cli({"assign", "/nonexistent.json"}).code == kExitUsage);
  CHECK(cli({"--alpha", "-1", "assign", data("occluded_scene.json")}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("data errors") {
  Run r = cli({"assign", data("malformed.json")});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("malformed.json:4") != std::string::npos);
  r = cli({"assign", data("bad_version.json")});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("schema version") != std::string::npos);
}

TEST_CASE("config file and flag precedence") {
  Scratch s;
  {
    std::ofstream(s / "run.toml") << "beta = 0.05\nalpha = inf\n";
  }
  // With constraints relaxed the fixture keeps all three matches...
  Run r = cli({"--config", s / "run.toml", "--out", s / "a.json", "assign",
               data("occluded_scene.json")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("filtered=0") != std::string::npos);
  // ...and a flag overrides the file.
  r = cli({"--config", s / "run.toml", "--beta", "0.6", "--out", s / "a.json", "assign",
           data("occluded_scene.json")});
  CHECK(r.out.find("filtered=1") != std::string::npos);
  {
    std::ofstream(s / "bad.toml") << "nonsense = 1\n";
  }
  r = cli({"--config", s / "bad.toml", "assign", data("occluded_scene.json")});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("bad.toml:1") != std::string::npos);
}

TEST_CASE("assign") {
  Scratch s;
  SUBCASE("occluded fixture filters a match") {
    const Run r = cli({"assign", data("occluded_scene.json")});
    REQUIRE(r.code == kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["method"] == "cgla");
    CHECK(doc["summary"]["filtered"].get<int>() >= 1);
    CHECK(doc["summary"]["positives"] == 2);
    CHECK(doc["summary"]["negatives"] == 1);
  }
  SUBCASE("legacy cost keeps every match") {
    const Run r = cli({"--legacy-cost", "assign", data("occluded_scene.json")});
    REQUIRE(r.code == kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["method"] == "legacy");
    CHECK(doc["summary"]["filtered"] == 0);
    CHECK(doc["summary"]["positives"] == 3);
  }
  SUBCASE("noiseless scenes filter nothing") {
    {
      std::ofstream(s / "clean.toml") << "hit_prob = 1\noccluded_hit_prob = 1\n"
                                         "center_jitter = 0\nscale_jitter = 0\n"
                                         "score_noise = 0\nclutter = 0\n";
    }
    REQUIRE(cli({"--config", s / "clean.toml", "--seed", "5", "--out", s / "clean.json",
                 "gen", "--images", "4"})
                .code == kExitOk);
    const Run r = cli({"--out", s / "a.json", "assign", s / "clean.json"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("filtered=0") != std::string::npos);
    const json doc = json::parse(slurp(s / "a.json"));
    CHECK(doc["summary"]["filtered"] == 0);
    CHECK(doc["summary"]["negatives"] == 0);
  }
  SUBCASE("empty scene list") {
    const Run r = cli({"assign", data("empty_scenes.json")});
    CHECK(r.code == kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["images"].empty());
    CHECK(doc["summary"]["positives"] == 0);
  }
}

TEST_CASE("outputs are byte-identical across runs") {
  Scratch s;
  REQUIRE(cli({"--seed", "11", "--out", s / "scenes1.json", "gen", "--images", "3"}).code ==
          kExitOk);
  REQUIRE(cli({"--seed", "11", "--out", s / "scenes2.json", "gen", "--images", "3"}).code ==
          kExitOk);
  CHECK(slurp(s / "scenes1.json") == slurp(s / "scenes2.json"));

  for (int k = 1; k <= 2; ++k) {
    const std::string n = std::to_string(k);
    REQUIRE(cli({"--out", s / ("a" + n + ".json"), "assign", s / "scenes1.json",
                 "--emit-dets", s / ("d" + n + ".json")})
                .code == kExitOk);
    REQUIRE(cli({"--out", s / ("e" + n + ".json"), "eval", "--dets", s / ("d" + n + ".json"),
                 "--gts", s / "scenes1.json"})
                .code == kExitOk);
  }
  CHECK(slurp(s / "a1.json") == slurp(s / "a2.json"));
  CHECK(slurp(s / "d1.json") == slurp(s / "d2.json"));
  CHECK(slurp(s / "e1.json") == slurp(s / "e2.json"));
}

TEST_CASE("eval") {
  SUBCASE("dets equal to gts, and no dets") {
    Scratch s;
    {
      std::ofstream(s / "perfect.json") << R"({"schema": 1, "images": [
        {"id": 0, "preds": [{"box": [0, 0, 10, 20], "score": 0.9},
                            {"box": [100, 0, 110, 20], "score": 0.8}]},
        {"id": 1, "preds": [{"box": [0, 0, 10, 20], "score": 0.7},
                            {"box": [100, 0, 110, 20], "score": 0.6}]}]})";
    }
    Run r = cli({"--out", s / "p.json", "eval", "--dets", s / "perfect.json", "--gts",
                 data("hand_gts.json")});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("MR 0.000000\n", 0) == 0);
    CHECK(json::parse(slurp(s / "p.json"))["mr"] == 0.0);

    r = cli({"eval", "--dets", data("empty_scenes.json"), "--gts", data("hand_gts.json")});
    REQUIRE(r.code == kExitOk);
    CHECK(json::parse(r.out)["mr"] == 1.0);
  }
  SUBCASE("golden regression") {
    const Run r = cli({"eval", "--dets", data("hand_dets.json"), "--gts", data("hand_gts.json")});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out == slurp(data("eval_golden.json")));
  }
  SUBCASE("unknown image id") {
    Scratch s;
    std::ofstream(s / "stray.json") << R"({"schema": 1, "images": [{"id": 99, "preds": []}]})";
    const Run r = cli({"eval", "--dets", s / "stray.json", "--gts", data("hand_gts.json")});
    CHECK(r.code == kExitData);
  }
}

TEST_CASE("sweep") {
  Scratch s;
  REQUIRE(cli({"--seed", "100", "--out", s / "scenes.json", "gen", "--images", "6"}).code ==
          kExitOk);

  SUBCASE("four settings") {
    const Run r = cli({"--out", s / "sw.json", "sweep", s / "scenes.json", "--alphas",
                       "0.2,0.3", "--betas", "0.5,0.6"});
    REQUIRE(r.code == kExitOk);
    const json rows = json::parse(slurp(s / "sw.json"))["rows"];
    REQUIRE(rows.size() == 4);
    CHECK(rows[0]["alpha"] == 0.2);
    CHECK(rows[0]["beta"] == 0.5);
    CHECK(rows[3]["alpha"] == 0.3);
    CHECK(rows[3]["beta"] == 0.6);
  }
  SUBCASE("singleton grid matches assign then eval") {
    REQUIRE(cli({"--out", s / "sw.json", "sweep", s / "scenes.json", "--alphas", "0.3",
                 "--betas", "0.6"})
                .code == kExitOk);
    REQUIRE(cli({"--out", s / "a.json", "assign", s / "scenes.json", "--emit-dets",
                 s / "d.json"})
                .code == kExitOk);
    REQUIRE(cli({"--out", s / "e.json", "eval", "--dets", s / "d.json", "--gts",
                 s / "scenes.json"})
                .code == kExitOk);
    const json rows = json::parse(slurp(s / "sw.json"))["rows"];
    const json assigned = json::parse(slurp(s / "a.json"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0]["mr"] == json::parse(slurp(s / "e.json"))["mr"]);
    CHECK(rows[0]["filtered"] == assigned["summary"]["filtered"]);
    CHECK(rows[0]["positives"] == assigned["summary"]["positives"]);
  }
  SUBCASE("stricter beta filters more") {
    REQUIRE(cli({"--out", s / "sw.json", "sweep", s / "scenes.json", "--alphas", "0.3",
                 "--betas", "0.4,0.8"})
                .code == kExitOk);
    const json rows = json::parse(slurp(s / "sw.json"))["rows"];
    CHECK(rows[1]["filtered_rate"].get<double>() > rows[0]["filtered_rate"].get<double>());
  }
  SUBCASE("empty grid is a usage error") {
    std::ofstream(s / "g.toml") << "sweep_beta = []\n";
    CHECK(cli({"--config", s / "g.toml", "sweep", s / "scenes.json"}).code == kExitUsage);
  }
}

TEST_CASE("loss report") {
  const Run r = cli({"loss-report", data("occluded_scene.json")});
  REQUIRE(r.code == kExitOk);
  const json doc = json::parse(r.out);
  REQUIRE(doc["images"].size() == 1);
  CHECK(doc["sum_pos"].get<double>() >= 0.0);
  CHECK(doc["sum_neg"].get<double>() > 0.0);
}
