// Copyright 2026 The Authors.
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

#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "p3/fs.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result p3cli(const std::string& args, const fs::path& work, const std::string& env = "") {
  const auto out = work / "stdout.txt";
  const auto err = work / "stderr.txt";
  const std::string cmd = env + " '" + std::string(P3_CLI_PATH) + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = oracle::slurp(out);
  r.err = oracle::slurp(err);
  return r;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

size_t lines_starting(const std::string& text, const std::string& prefix) {
  size_t n = 0, pos = 0;
  while (pos < text.size()) {
    if (text.compare(pos, prefix.size(), prefix) == 0) ++n;
    pos = text.find('\n', pos);
    if (pos == std::string::npos) break;
    ++pos;
  }
  return n;
}

// Small simulated corpus: dataset.jsonl plus scores/ for five epochs.
struct Fixture {
  oracle::TempDir tmp{"cli"};
  fs::path dir = tmp.path();
  fs::path sim = dir / "sim";
  fs::path config = dir / "config.json";

  Fixture() {
    write(dir / "spec.json",
          R"({"n": 120, "dim": 8, "eta": 0.05, "run": {"k": 12, "epochs": 5, "seed": 2}})");
    write(config, R"({"k": 12, "epochs": 5, "seed": 2})");
    const auto r = p3cli("--quiet --out '" + sim.string() + "' simulate --spec '" +
                             (dir / "spec.json").string() + "'",
                         dir);
    REQUIRE(r.code == 0);
  }

  std::string data() const { return "--dataset '" + (sim / "dataset.jsonl").string() + "'"; }
  std::string scores() const { return "--scores '" + (sim / "scores").string() + "'"; }
  std::string cfg() const { return "--config '" + config.string() + "'"; }
  std::string out(const std::string& name) const {
    return "--out '" + (dir / name).string() + "'";
  }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
  oracle::TempDir tmp("cli");
  CHECK(p3cli("", tmp.path()).code == 1);
  CHECK(p3cli("bogus", tmp.path()).code == 1);
  CHECK(p3cli("select --dataset x", tmp.path()).code == 1);
  CHECK(p3cli("--out o simulate --spec '" + (tmp.path() / "none.json").string() + "'",
              tmp.path()).code == 1);
  CHECK(p3cli("--help", tmp.path()).code == 0);
}

TEST_CASE("simulate spec errors exit 2") {
  oracle::TempDir tmp("cli");
  write(tmp.path() / "bad.json", R"({"n": -3})");
  CHECK(p3cli("--out o simulate --spec '" + (tmp.path() / "bad.json").string() + "'",
              tmp.path()).code == 2);
}

TEST_CASE("bundled spec simulates") {
  oracle::TempDir tmp("cli");
  const auto r = p3cli("--out '" + (tmp.path() / "o").string() + "' simulate --spec '" +
                           std::string(P3_SPECS_DIR) + "/default_sim.json'",
                       tmp.path());
  CHECK(r.code == 0);
  CHECK(lines_starting(r.out, "epoch\t") == 1);
  CHECK(fs::exists(tmp.path() / "o" / "manifests" / "manifest.epoch5.json"));
}

TEST_CASE("validate") {
  Fixture f;
  auto ok = p3cli("validate " + f.data() + " --scores '" +
                      (f.sim / "scores" / "scores.epoch1.jsonl").string() + "'",
                  f.dir);
  CHECK(ok.code == 0);
  CHECK(ok.out == "OK N=120, scored=120\n");

  write(f.dir / "dup.jsonl",
        "{\"id\":\"a\",\"instruction\":\"\",\"output\":\"x\"}\n"
        "{\"id\":\"a\",\"instruction\":\"\",\"output\":\"y\"}\n");
  auto dup = p3cli("validate --dataset '" + (f.dir / "dup.jsonl").string() + "'", f.dir);
  CHECK(dup.code == 2);
  CHECK(dup.out.find("dup.jsonl:2 [a]: duplicate sample id") != std::string::npos);

  write(f.dir / "one.jsonl", "{\"id\":\"a\",\"instruction\":\"\",\"output\":\"x\"}\n");
  write(f.dir / "s.jsonl",
        "{\"sample_id\":\"a\",\"epoch\":1,\"model_tag\":\"m\",\"action_probs\":[0.5],"
        "\"embedding\":[0.5,0.0]}\n");
  auto norm = p3cli("validate --dataset '" + (f.dir / "one.jsonl").string() + "' --scores '" +
                        (f.dir / "s.jsonl").string() + "'",
                    f.dir);
  CHECK(norm.code == 2);
  CHECK(norm.out.find("s.jsonl:1 [a]: embedding norm 0.5") != std::string::npos);
}

TEST_CASE("select full run, determinism and report") {
  Fixture f;
  auto first = p3cli(f.cfg() + " " + f.out("a") + " select " + f.data() + " " + f.scores(), f.dir);
  REQUIRE(first.code == 0);
  CHECK(lines_starting(first.out, "epoch ") == 5);
  CHECK(first.out.find("lambda=") != std::string::npos);
  for (int e = 1; e <= 5; ++e) {
    CHECK(fs::exists(f.dir / "a" / "manifests" / ("manifest.epoch" + std::to_string(e) + ".json")));
  }
  auto second = p3cli(f.cfg() + " " + f.out("b") + " --quiet select " + f.data() + " " + f.scores(),
                      f.dir);
  CHECK(second.code == 0);
  CHECK(second.out.empty());
  for (int e = 1; e <= 5; ++e) {
    const auto name = "manifests/manifest.epoch" + std::to_string(e) + ".json";
    CHECK(p3::fnv1a64(oracle::slurp(f.dir / "a" / name)) ==
          p3::fnv1a64(oracle::slurp(f.dir / "b" / name)));
  }

  auto report = p3cli("report --manifests '" + (f.dir / "a" / "manifests").string() + "' " +
                          f.scores() + " " + f.data(),
                      f.dir);
  CHECK(report.code == 0);
  CHECK(lines_starting(report.out, "histogram\t") == 5);
  CHECK(lines_starting(report.out, "diversity\t") == 5);

  // report files under --out
  auto written = p3cli(f.out("rep") + " --quiet report --manifests '" +
                           (f.dir / "a" / "manifests").string() + "' " + f.scores(),
                       f.dir);
  CHECK(written.code == 0);
  CHECK(fs::exists(f.dir / "rep" / "diversity.tsv"));
  CHECK(fs::exists(f.dir / "rep" / "embeddings.epoch3.tsv"));
}

TEST_CASE("report edge cases") {
  Fixture f;
  fs::create_directories(f.dir / "empty");
  CHECK(p3cli("report --manifests '" + (f.dir / "empty").string() + "' " + f.scores(), f.dir).code == 2);

  fs::create_directories(f.dir / "one");
  fs::copy_file(f.sim / "manifests" / "manifest.epoch2.json", f.dir / "one" / "manifest.epoch2.json");
  auto single = p3cli("report --manifests '" + (f.dir / "one").string() + "' " + f.scores(), f.dir);
  CHECK(single.code == 0);
  CHECK(lines_starting(single.out, "histogram\t") == 1);
  CHECK(lines_starting(single.out, "diversity\t") == 1);

  auto missing = p3cli("report --manifests '" + (f.dir / "one").string() + "' --scores '" +
                           (f.dir / "empty").string() + "'",
                       f.dir);
  CHECK(missing.code == 2);
}

TEST_CASE("select one epoch at a time") {
  Fixture f;
  auto e3 = p3cli(f.cfg() + " " + f.out("s") + " select " + f.data() + " " + f.scores() +
                      " --epoch 3",
                  f.dir);
  CHECK(e3.code == 2);
  CHECK(e3.err.find("missing state") != std::string::npos);

  for (int e = 1; e <= 5; ++e) {
    auto r = p3cli(f.cfg() + " " + f.out("s") + " --quiet select " + f.data() + " " + f.scores() +
                       " --epoch " + std::to_string(e),
                   f.dir);
    CHECK(r.code == 0);
  }
  // stepwise equals the full run
  auto full = p3cli(f.cfg() + " " + f.out("full") + " --quiet select " + f.data() + " " + f.scores(),
                    f.dir);
  CHECK(full.code == 0);
  CHECK(oracle::slurp(f.dir / "s" / "manifests" / "manifest.epoch5.json") ==
        oracle::slurp(f.dir / "full" / "manifests" / "manifest.epoch5.json"));

  // repeating an epoch that is already done
  auto again = p3cli(f.cfg() + " " + f.out("s") + " select " + f.data() + " " + f.scores() +
                         " --epoch 3",
                     f.dir);
  CHECK(again.code == 2);
}

TEST_CASE("state dir from the environment") {
  Fixture f;
  const auto state = f.dir / "elsewhere";
  auto r = p3cli(f.cfg() + " " + f.out("e") + " --quiet select " + f.data() + " " + f.scores() +
                     " --epoch 1",
                 f.dir, "P3_STATE_DIR='" + state.string() + "'");
  CHECK(r.code == 0);
  CHECK(fs::exists(state / "history.json"));
  CHECK_FALSE(fs::exists(f.dir / "e" / "state" / "history.json"));
}

TEST_CASE("hook failure exits 4") {
  Fixture f;
  write(f.dir / "hook.sh", "#!/bin/sh\ntest -f \"$1\" || exit 9\ncase \"$1\" in *epoch2*) exit 3;; esac\n");
  fs::permissions(f.dir / "hook.sh", fs::perms::owner_all);
  auto r = p3cli(f.cfg() + " " + f.out("h") + " --quiet select " + f.data() + " " + f.scores() +
                     " --hook '" + (f.dir / "hook.sh").string() + "'",
                 f.dir);
  CHECK(r.code == 4);
  CHECK(fs::exists(f.dir / "h" / "manifests" / "manifest.epoch2.json"));
  CHECK_FALSE(fs::exists(f.dir / "h" / "manifests" / "manifest.epoch3.json"));
}

TEST_CASE("missing scores exit 2") {
  Fixture f;
  auto r = p3cli(f.cfg() + " " + f.out("m") + " select " + f.data() + " --scores '" +
                     f.dir.string() + "'",
                 f.dir);
  CHECK(r.code == 2);
}

TEST_CASE("baselines") {
  Fixture f;
  auto random = p3cli(f.cfg() + " " + f.out("r") + " --quiet baseline " + f.data() +
                          " --strategy random",
                      f.dir);
  CHECK(random.code == 0);
  CHECK(fs::exists(f.dir / "r" / "manifests" / "manifest.epoch5.json"));

  auto curriculum = p3cli(f.cfg() + " " + f.out("c") + " --quiet baseline " + f.data() + " " +
                              f.scores() + " --strategy curriculum --metric level",
                          f.dir);
  CHECK(curriculum.code == 0);

  auto no_metric = p3cli(f.cfg() + " " + f.out("c2") + " baseline " + f.data() +
                             " --strategy curriculum",
                         f.dir);
  CHECK(no_metric.code == 1);

  auto p3_as_baseline = p3cli(f.cfg() + " " + f.out("c3") + " baseline " + f.data(), f.dir);
  CHECK(p3_as_baseline.code == 1);
}

TEST_CASE("score-mock feeds select one epoch at a time") {
  Fixture f;
  const auto loop = f.dir / "loop";
  for (int e = 1; e <= 3; ++e) {
    const auto es = std::to_string(e);
    auto s = p3cli("--quiet --out '" + loop.string() + "' score-mock " + f.data() + " --epoch " +
                       es + " --manifests '" + (loop / "manifests").string() + "' --eta 0.1 --dim 12",
                   f.dir);
    REQUIRE(s.code == 0);
    CHECK(fs::exists(loop / ("scores.epoch" + es + ".jsonl")));
    auto v = p3cli("validate " + f.data() + " --scores '" +
                       (loop / ("scores.epoch" + es + ".jsonl")).string() + "'",
                   f.dir);
    CHECK(v.code == 0);
    auto r = p3cli(f.cfg() + " --quiet --out '" + loop.string() + "' select " + f.data() +
                       " --scores '" + loop.string() + "' --epoch " + es,
                   f.dir);
    CHECK(r.code == 0);
  }
  CHECK(p3cli("--out x score-mock " + f.data() + " --epoch 1 --segmentation tokens", f.dir).code == 1);
}
