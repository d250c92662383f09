// Copyright 2026 The jcrf Authors.
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
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = JCRF_TEST_DATA;
const std::string kCli = JCRF_CLI_PATH;

struct Workdir {
  fs::path path;
  Workdir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("jcrf_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string data(const std::string& name) { return (kData / name).string(); }

int run(const Workdir& w, const std::string& args, const std::string& stdout_file = "") {
  const std::string out = stdout_file.empty() ? w / "stdout.txt" : stdout_file;
  const std::string cmd = "'" + kCli + "' " + args + " >'" + out + "' 2>>'" + (w / "stderr.txt") + "'";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

nlohmann::json report(const std::string& path) {
  auto j = nlohmann::json::parse(slurp(path), nullptr, false);
  REQUIRE_FALSE(j.is_discarded());
  return j;
}

std::string train_args(const Workdir& w, const std::string& regime) {
  return "train --corpus " + data("toy_train.conll") + " --inventory " + data("toy_inventory.tsv") +
         " --semlink " + data("toy_semlink.json") + " --config " + data("toy_config.json") +
         " --regime " + regime + " --out " + (w / (regime + ".json"));
}

}  // namespace

TEST_CASE("help and usage errors") {
  Workdir w;
  CHECK(run(w, "--help") == 0);
  CHECK(run(w, "") == 2);
  CHECK(run(w, "frobnicate") == 2);
  CHECK(run(w, "train --inventory " + data("toy_inventory.tsv") + " --out " + (w / "m.json")) == 2);
  CHECK(run(w, "build-space --corpus " + data("toy_train.conll") + " --out " + (w / "s")) == 2);
  CHECK(run(w, "eval --corpus " + data("toy_dev.conll")) == 2);
  CHECK(run(w, "train --corpus " + data("toy_train.conll") + " --inventory " +
                   data("toy_inventory.tsv") + " --regime nonsense --out " + (w / "m.json")) != 0);
  CHECK(run(w, "tag --model " + (w / "missing.json") + " --corpus " + data("toy_dev.conll") +
                   " --no-semlink --out " + (w / "p.conll")) == 2);
}

TEST_CASE("build-space reports sizes and writes its files") {
  Workdir w;
  REQUIRE(run(w, "build-space --corpus " + data("toy_train.conll") + " --inventory " +
                     data("toy_inventory.tsv") + " --out " + (w / "space")) == 0);
  const auto line = slurp(w / "stdout.txt");
  CHECK(line.rfind("labels\t", 0) == 0);
  CHECK(line.find("cross_product\t48") != std::string::npos);
  for (const char* f : {"filter.tsv", "inventory.tsv", "labels.tsv"}) {
    CHECK(fs::is_regular_file(w.path / "space" / f));
  }
}

TEST_CASE("train, tag and eval end to end") {
  Workdir w;
  REQUIRE(run(w, train_args(w, "joint") + " --dev " + data("toy_dev.conll") + " --metrics " +
                     (w / "metrics.jsonl")) == 0);
  CHECK(fs::is_regular_file(w / "joint.json"));
  std::ifstream metrics(w / "metrics.jsonl");
  int lines = 0;
  for (std::string l; std::getline(metrics, l);) {
    auto j = nlohmann::json::parse(l, nullptr, false);
    CHECK_FALSE(j.is_discarded());
    ++lines;
  }
  CHECK(lines == 5);

  SUBCASE("tag requires an explicit Semlink choice") {
    CHECK(run(w, "tag --model " + (w / "joint.json") + " --corpus " + data("toy_dev.conll") +
                     " --out " + (w / "p.conll")) == 2);
  }

  SUBCASE("constrained tag has no violations") {
    REQUIRE(run(w, "tag --model " + (w / "joint.json") + " --corpus " + data("toy_dev.conll") +
                       " --semlink " + data("toy_semlink.json") + " --out " + (w / "p.conll")) == 0);
    REQUIRE(run(w, "eval --corpus " + data("toy_dev.conll") + " --pred " + (w / "p.conll") +
                       " --semlink " + data("toy_semlink.json"),
                w / "report.json") == 0);
    const auto j = report(w / "report.json");
    CHECK(j["rho"].get<double>() == 0.0);
    CHECK(j["vn"]["f1"].get<double>() > 0.0);
  }

  SUBCASE("unconstrained tag still evaluates") {
    REQUIRE(run(w, "tag --model " + (w / "joint.json") + " --corpus " + data("toy_dev.conll") +
                       " --no-semlink --out " + (w / "p.conll")) == 0);
    REQUIRE(run(w, "eval --corpus " + data("toy_dev.conll") + " --pred " + (w / "p.conll") +
                       " --semlink " + data("toy_semlink.json") + " --out " + (w / "diag.tsv"),
                w / "report.json") == 0);
    const auto j = report(w / "report.json");
    CHECK(j["rho"].get<double>() >= 0.0);
    CHECK(fs::is_regular_file(w / "diag.tsv"));
  }

  SUBCASE("completion keeps the observed PB tags") {
    REQUIRE(run(w, "complete --model " + (w / "joint.json") + " --corpus " + data("toy_dev.conll") +
                       " --semlink " + data("toy_semlink.json") + " --out " + (w / "c.conll")) == 0);
    REQUIRE(run(w, "eval --corpus " + data("toy_dev.conll") + " --pred " + (w / "c.conll"),
                w / "report.json") == 0);
    CHECK(report(w / "report.json")["pb"]["f1"].get<double>() == 1.0);
  }

  SUBCASE("strict Semlink rejects uncovered predicates") {
    CHECK(run(w, "tag --model " + (w / "joint.json") + " --corpus " + data("two_sentences.conll") +
                     " --semlink " + data("toy_semlink.json") + " --strict-semlink --out " +
                     (w / "p.conll")) == 3);
  }

  SUBCASE("completion needs PB columns") {
    std::ofstream f(w / "vn_only.conll");
    f << "She\t-\t-\tB-Theme\t-\n"
         "feared\tfear.01\tadmire-31.2\tV\t-\n"
         "it\t-\t-\tB-Agent\t-\n";
    f.close();
    CHECK(run(w, "complete --model " + (w / "joint.json") + " --corpus " + (w / "vn_only.conll") +
                     " --semlink " + data("toy_semlink.json") + " --out " + (w / "c.conll")) == 2);
  }

  SUBCASE("malformed corpus is a data error") {
    std::ofstream f(w / "bad.conll");
    f << "She\t-\t-\tB-Theme\tB-Arg0\n"
         "feared\tfear.01\tadmire-31.2\tV\n";
    f.close();
    CHECK(run(w, "tag --model " + (w / "joint.json") + " --corpus " + (w / "bad.conll") +
                     " --no-semlink --out " + (w / "p.conll")) == 3);
  }

  SUBCASE("corrupt model is a data error") {
    std::ofstream(w / "corrupt.json") << "{\"format\": \"something else\"}";
    CHECK(run(w, "tag --model " + (w / "corrupt.json") + " --corpus " + data("toy_dev.conll") +
                     " --no-semlink --out " + (w / "p.conll")) == 3);
  }
}

TEST_CASE("eval of gold against itself is perfect") {
  Workdir w;
  REQUIRE(run(w, "eval --corpus " + data("two_sentences.conll") + " --pred " +
                     data("two_sentences.conll") + " --semlink " + data("toy_semlink.json"),
              w / "report.json") == 0);
  const auto j = report(w / "report.json");
  CHECK(j["vn"]["f1"].get<double>() == 1.0);
  CHECK(j["pb"]["f1"].get<double>() == 1.0);
  CHECK(j["rho"].get<double>() == 0.0);
}

TEST_CASE("eval rejects misaligned predictions") {
  Workdir w;
  CHECK(run(w, "eval --corpus " + data("two_sentences.conll") + " --pred " +
                   data("toy_dev.conll")) == 3);
}

TEST_CASE("every regime trains and tags") {
  Workdir w;
  for (const char* r : {"marginal", "marginal-seml", "joint", "joint-pb", "multitask"}) {
    CAPTURE(r);
    REQUIRE(run(w, train_args(w, r)) == 0);
    CHECK(run(w, "tag --model " + (w / (std::string(r) + ".json")) + " --corpus " +
                     data("toy_dev.conll") + " --semlink " + data("toy_semlink.json") + " --out " +
                     (w / "p.conll")) == 0);
  }
}
