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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "fagcn/fagcn.h"
#include "temp_dir.hpp"

using fagcn::testing::read_file;
using fagcn::testing::TempDir;
using nlohmann::json;

namespace {

const std::filesystem::path kData = FAGCN_TEST_DATA_DIR;
const std::string kEdges = (kData / "small.edges").string();
const std::string kContent = (kData / "small.content").string();

std::string config_text() { return read_file(kData / "small_config.json"); }

std::string take(char* s) {
  std::string out = s ? s : "";
  fagcn_string_free(s);
  return out;
}

struct Owned {
  fagcn_dataset* ds = nullptr;
  fagcn_model* model = nullptr;
  ~Owned() {
    fagcn_dataset_free(ds);
    fagcn_model_free(model);
  }
};

}  // namespace

TEST(CApi, VersionAndCanonicalConfig) {
  EXPECT_STREQ(fagcn_version(), "0.1.0");
  char* out = nullptr;
  ASSERT_EQ(fagcn_config_canonical(R"({"d_h": 9})", &out), FAGCN_OK);
  const json cfg = json::parse(take(out));
  EXPECT_EQ(cfg["d_h"], 9);
  EXPECT_EQ(cfg["variant"], "context");
  EXPECT_EQ(fagcn_config_canonical(R"({"d_h": 0})", &out), FAGCN_ERR_INPUT);
  EXPECT_NE(std::string(fagcn_last_error()).find("d_h"), std::string::npos);
  EXPECT_EQ(fagcn_config_canonical("{", &out), FAGCN_ERR_INPUT);
  EXPECT_EQ(fagcn_config_canonical(nullptr, &out), FAGCN_ERR_INPUT);
}

TEST(CApi, DatasetMetadataAndErrors) {
  Owned o;
  ASSERT_EQ(fagcn_dataset_load(kEdges.c_str(), kContent.c_str(), &o.ds), FAGCN_OK);
  EXPECT_EQ(fagcn_dataset_num_nodes(o.ds), 12u);
  EXPECT_EQ(fagcn_dataset_num_classes(o.ds), 2u);
  EXPECT_EQ(fagcn_dataset_skipped_edges(o.ds), 1u);
  EXPECT_GT(fagcn_dataset_vocab_size(o.ds), 0u);
  fagcn_dataset* missing = nullptr;
  EXPECT_EQ(fagcn_dataset_load("/nonexistent.edges", kContent.c_str(), &missing), FAGCN_ERR_INPUT);
  EXPECT_EQ(missing, nullptr);
  TempDir dir;
  const std::string bad = dir.write("bad.content", "x\n").string();
  EXPECT_EQ(fagcn_dataset_load(kEdges.c_str(), bad.c_str(), &missing), FAGCN_ERR_DATA);
}

TEST(CApi, DigestsTrackFileAndNoise) {
  char* out = nullptr;
  TempDir dir;
  const std::string abc = dir.write("abc.txt", "abc").string();
  ASSERT_EQ(fagcn_file_digest(abc.c_str(), &out), FAGCN_OK);
  EXPECT_EQ(take(out), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(fagcn_file_digest("/nonexistent", &out), FAGCN_ERR_INPUT);

  Owned o;
  ASSERT_EQ(fagcn_dataset_load(kEdges.c_str(), kContent.c_str(), &o.ds), FAGCN_OK);
  ASSERT_EQ(fagcn_dataset_content_digest(o.ds, "{}", &out), FAGCN_OK);
  const std::string clean = take(out);
  ASSERT_EQ(fagcn_dataset_content_digest(o.ds, "{}", &out), FAGCN_OK);
  EXPECT_EQ(take(out), clean);
  ASSERT_EQ(fagcn_dataset_content_digest(
                o.ds, R"({"noise_protocol": "inject", "noise_ratio": 0.5})", &out),
            FAGCN_OK);
  EXPECT_NE(take(out), clean);
}

TEST(CApi, TrainSaveLoadEvaluate) {
  Owned o;
  ASSERT_EQ(fagcn_dataset_load(kEdges.c_str(), kContent.c_str(), &o.ds), FAGCN_OK);
  std::size_t calls = 0;
  auto cb = [](std::size_t, double loss, void* user) {
    EXPECT_TRUE(std::isfinite(loss));
    ++*static_cast<std::size_t*>(user);
  };
  ASSERT_EQ(fagcn_train(config_text().c_str(), o.ds, cb, &calls, &o.model), FAGCN_OK)
      << fagcn_last_error();
  EXPECT_EQ(calls, 60u);
  const double test_acc = fagcn_model_test_accuracy(o.model);
  EXPECT_GE(test_acc, 0.0);
  EXPECT_LE(test_acc, 1.0);
  char* out = nullptr;
  ASSERT_EQ(fagcn_model_history_csv(o.model, &out), FAGCN_OK);
  const std::string csv = take(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,loss");

  TempDir dir;
  const std::string path = (dir.path() / "m.bin").string();
  ASSERT_EQ(fagcn_model_save(o.model, path.c_str()), FAGCN_OK);
  fagcn_model* loaded = nullptr;
  ASSERT_EQ(fagcn_model_load(path.c_str(), &loaded), FAGCN_OK);
  double acc = -1.0;
  ASSERT_EQ(fagcn_evaluate(loaded, o.ds, 7, &acc), FAGCN_OK) << fagcn_last_error();
  EXPECT_EQ(acc, test_acc);
  ASSERT_EQ(fagcn_model_config(loaded, &out), FAGCN_OK);
  EXPECT_EQ(json::parse(take(out))["seed"], 7);
  const std::string resaved = (dir.path() / "m2.bin").string();
  ASSERT_EQ(fagcn_model_save(loaded, resaved.c_str()), FAGCN_OK);
  EXPECT_EQ(read_file(path), read_file(resaved));
  fagcn_model_free(loaded);

  const std::string other = dir.write("other.content", "z1\tml\tw\nz2\tdb\tv\n").string();
  const std::string other_edges = dir.write("other.edges", "z1 z2\n").string();
  fagcn_dataset* ds2 = nullptr;
  ASSERT_EQ(fagcn_dataset_load(other_edges.c_str(), other.c_str(), &ds2), FAGCN_OK);
  EXPECT_EQ(fagcn_evaluate(o.model, ds2, 7, &acc), FAGCN_ERR_DATA);
  EXPECT_NE(std::string(fagcn_last_error()).find("expects"), std::string::npos);
  fagcn_dataset_free(ds2);
}

TEST(CApi, CorruptCheckpointIsDataError) {
  Owned o;
  ASSERT_EQ(fagcn_dataset_load(kEdges.c_str(), kContent.c_str(), &o.ds), FAGCN_OK);
  ASSERT_EQ(fagcn_train(R"({"d_i":4,"d_o":4,"d_h":2,"epochs":1})", o.ds, nullptr, nullptr, &o.model),
            FAGCN_OK);
  TempDir dir;
  const auto path = dir.path() / "m.bin";
  ASSERT_EQ(fagcn_model_save(o.model, path.c_str()), FAGCN_OK);
  std::string bytes = read_file(path);
  dir.write("cut.bin", bytes.substr(0, bytes.size() - 5));
  fagcn_model* m = nullptr;
  EXPECT_EQ(fagcn_model_load((dir.path() / "cut.bin").c_str(), &m), FAGCN_ERR_DATA);
  EXPECT_EQ(m, nullptr);
  EXPECT_EQ(fagcn_model_load((dir.path() / "none.bin").c_str(), &m), FAGCN_ERR_INPUT);
}

TEST(CApi, ExportAttention) {
  Owned o;
  ASSERT_EQ(fagcn_dataset_load(kEdges.c_str(), kContent.c_str(), &o.ds), FAGCN_OK);
  ASSERT_EQ(fagcn_train(config_text().c_str(), o.ds, nullptr, nullptr, &o.model), FAGCN_OK);
  char* out = nullptr;
  ASSERT_EQ(fagcn_export_attention(o.model, o.ds, "n1", &out), FAGCN_OK) << fagcn_last_error();
  const json doc = json::parse(take(out));
  EXPECT_EQ(doc["center"], "n1");
  EXPECT_EQ(doc["variant"], "context");
  ASSERT_FALSE(doc["neighbors"].empty());
  for (const auto& nb : doc["neighbors"]) {
    double s = 0.0;
    for (const auto& f : nb["features"]) s += f["alpha"].get<double>();
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
  EXPECT_EQ(fagcn_export_attention(o.model, o.ds, "missing", &out), FAGCN_ERR_INPUT);
}

TEST(CApi, SweepAndNullArguments) {
  Owned o;
  ASSERT_EQ(fagcn_dataset_load(kEdges.c_str(), kContent.c_str(), &o.ds), FAGCN_OK);
  char* out = nullptr;
  ASSERT_EQ(fagcn_sweep(R"({"d_i":4,"d_o":4,"d_h":2,"epochs":2})",
                        R"({"axis":"noise-replace","values":[0.1,0.2],"seeds":[1,2],
                            "variants":["none","baseline_gcn"]})",
                        o.ds, 1, &out),
            FAGCN_OK)
      << fagcn_last_error();
  const std::string csv = take(out);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 5u);
  EXPECT_EQ(fagcn_sweep("{}", R"({"axis":"bogus","values":[1]})", o.ds, 1, &out), FAGCN_ERR_INPUT);
  EXPECT_EQ(fagcn_train("{}", nullptr, nullptr, nullptr, &o.model), FAGCN_ERR_INPUT);
  EXPECT_EQ(fagcn_evaluate(nullptr, o.ds, 1, nullptr), FAGCN_ERR_INPUT);
  EXPECT_EQ(fagcn_dataset_num_nodes(nullptr), 0u);
  fagcn_string_free(nullptr);
  fagcn_model_free(nullptr);
  fagcn_dataset_free(nullptr);
}
