/*
Copyright 2026 The fagcn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "temp_dir.hpp"

using fagcn::testing::read_file;
using fagcn::testing::TempDir;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FAGCN_TEST_DATA_DIR;

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun cli(const std::string& args, const TempDir& dir) {
  const fs::path out = dir.path() / "stdout.txt";
  const fs::path err = dir.path() / "stderr.txt";
  const std::string cmd = quoted(FAGCN_CLI_PATH) + " " + args + " >" + quoted(out) + " 2>" + quoted(err);
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

std::string data_args() {
  return "--edges " + quoted(kData / "small.edges") + " --content " + quoted(kData / "small.content");
}

std::string train_args(const fs::path& out_dir) {
  return "train --config " + quoted(kData / "small_config.json") + " " + data_args() + " --out-dir " +
         quoted(out_dir);
}

}  // namespace

TEST(Cli, TrainWritesOutputsAndEvalMatches) {
  TempDir dir;
  const fs::path run = dir.path() / "run";
  const CliRun t = cli(train_args(run), dir);
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_TRUE(fs::exists(run / "checkpoint.bin"));
  EXPECT_TRUE(fs::exists(run / "history.csv"));
  ASSERT_TRUE(fs::exists(run / "manifest.json"));
  for (const auto& entry : fs::directory_iterator(run)) {
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
  const json manifest = json::parse(read_file(run / "manifest.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["config"]["seed"], 7);
  EXPECT_EQ(manifest["data"]["edges"]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(manifest["seeds"], json::array({7}));
  EXPECT_TRUE(manifest["outputs_sha256"].contains("checkpoint"));
  char expected[32];
  std::snprintf(expected, sizeof expected, "accuracy=%.4f\n", manifest["test_accuracy"].get<double>());

  const std::string eval = "eval --checkpoint " + quoted(run / "checkpoint.bin") + " " + data_args();
  const CliRun e1 = cli(eval, dir);
  ASSERT_EQ(e1.code, 0) << e1.err;
  EXPECT_EQ(e1.out, expected);
  const CliRun e2 = cli(eval, dir);
  EXPECT_EQ(e2.out, e1.out);
}

TEST(Cli, RunsAreByteIdenticalAndReplayable) {
  TempDir dir;
  ASSERT_EQ(cli(train_args(dir.path() / "a"), dir).code, 0);
  ASSERT_EQ(cli(train_args(dir.path() / "b"), dir).code, 0);
  for (const char* name : {"checkpoint.bin", "history.csv"}) {
    EXPECT_EQ(read_file(dir.path() / "a" / name), read_file(dir.path() / "b" / name)) << name;
  }
  const CliRun replay = cli("train --manifest " + quoted(dir.path() / "a" / "manifest.json") +
                             " --out-dir " + quoted(dir.path() / "c"),
                         dir);
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(read_file(dir.path() / "a" / "checkpoint.bin"), read_file(dir.path() / "c" / "checkpoint.bin"));
  EXPECT_EQ(read_file(dir.path() / "a" / "history.csv"), read_file(dir.path() / "c" / "history.csv"));
}

TEST(Cli, SeedOverrideChangesRun) {
  TempDir dir;
  ASSERT_EQ(cli(train_args(dir.path() / "a"), dir).code, 0);
  ASSERT_EQ(cli("--seed 8 " + train_args(dir.path() / "b"), dir).code, 0);
  EXPECT_NE(read_file(dir.path() / "a" / "history.csv"), read_file(dir.path() / "b" / "history.csv"));
  EXPECT_EQ(json::parse(read_file(dir.path() / "b" / "manifest.json"))["config"]["seed"], 8);
}

TEST(Cli, ErrorExitCodes) {
  TempDir dir;
  const CliRun missing = cli("train --config " + quoted(kData / "small_config.json") + " --edges " +
                              quoted(dir.path() / "nope.edges") + " --content " +
                              quoted(kData / "small.content") + " --out-dir " + quoted(dir.path() / "x"),
                          dir);
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("nope.edges"), std::string::npos) << missing.err;
  EXPECT_FALSE(fs::exists(dir.path() / "x"));

  const fs::path bad_cfg = dir.write("bad.json", R"({"d_h": -1})");
  EXPECT_EQ(cli("train --config " + quoted(bad_cfg) + " " + data_args() + " --out-dir " +
                    quoted(dir.path() / "y"),
                dir)
                .code,
            2);
  EXPECT_EQ(cli("frobnicate", dir).code, 2);
  const fs::path bad_content = dir.write("bad.content", "only-one-field\n");
  EXPECT_EQ(cli("train --config " + quoted(kData / "small_config.json") + " --edges " +
                    quoted(kData / "small.edges") + " --content " + quoted(bad_content) +
                    " --out-dir " + quoted(dir.path() / "z"),
                dir)
                .code,
            3);
}

TEST(Cli, CorruptCheckpointAndExport) {
  TempDir dir;
  const fs::path run = dir.path() / "run";
  ASSERT_EQ(cli(train_args(run), dir).code, 0);
  const std::string bytes = read_file(run / "checkpoint.bin");
  const fs::path cut = dir.write("cut.bin", bytes.substr(0, bytes.size() / 2));
  const CliRun corrupt = cli("eval --checkpoint " + quoted(cut) + " " + data_args(), dir);
  EXPECT_EQ(corrupt.code, 3);
  EXPECT_TRUE(corrupt.out.empty());

  const fs::path att = dir.path() / "att.json";
  const std::string base = "export-attention --checkpoint " + quoted(run / "checkpoint.bin") + " " +
                           data_args() + " --out " + quoted(att);
  ASSERT_EQ(cli(base + " --node n3", dir).code, 0);
  const json doc = json::parse(read_file(att));
  EXPECT_EQ(doc["center"], "n3");
  for (const auto& nb : doc["neighbors"]) {
    double s = 0.0;
    for (const auto& f : nb["features"]) s += f["alpha"].get<double>();
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
  const fs::path att2 = dir.path() / "att2.json";
  const CliRun unknown = cli("export-attention --checkpoint " + quoted(run / "checkpoint.bin") + " " +
                              data_args() + " --out " + quoted(att2) + " --node n404",
                          dir);
  EXPECT_EQ(unknown.code, 2);
  EXPECT_FALSE(fs::exists(att2));
}

TEST(Cli, SweepWritesCsvAndRejectsUnknownAxis) {
  TempDir dir;
  const fs::path cfg = dir.write("cfg.json", R"({"d_i":4,"d_o":4,"d_h":2,"epochs":2})");
  const fs::path spec = dir.write(
      "spec.json", R"({"axis":"noise-inject","values":[0.0,0.5],"variants":["self","baseline_gcn"],
                       "seeds":[1,2],"edges":")" + (kData / "small.edges").string() +
                       R"(","content":")" + (kData / "small.content").string() + "\"}");
  const fs::path out = dir.path() / "sweep.csv";
  const CliRun ok = cli("sweep --config " + quoted(cfg) + " --spec " + quoted(spec) + " --out " + quoted(out), dir);
  ASSERT_EQ(ok.code, 0) << ok.err;
  const std::string csv = read_file(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "protocol,ratio,variant,mean_accuracy,std_accuracy,seeds");
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 5u);
  EXPECT_TRUE(fs::exists(dir.path() / "sweep.csv.manifest.json"));

  const fs::path bad = dir.write("bad.json", R"({"axis":"learning_rate","values":[1]})");
  const fs::path out2 = dir.path() / "bad.csv";
  EXPECT_EQ(cli("sweep --config " + quoted(cfg) + " --spec " + quoted(bad) + " " + data_args() +
                    " --out " + quoted(out2),
                dir)
                .code,
            2);
  EXPECT_FALSE(fs::exists(out2));
}
