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

// fagcn command-line driver. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "fagcn/fagcn.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CliFailure : std::runtime_error {
  CliFailure(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
  int exit_code;
};

int exit_code_of(fagcn_status s) {
  switch (s) {
    case FAGCN_OK: return 0;
    case FAGCN_ERR_INPUT: return kExitInput;
    case FAGCN_ERR_DATA: return kExitData;
    case FAGCN_ERR_NUMERIC: return kExitNumeric;
    default: return kExitInternal;
  }
}

void check(fagcn_status s) {
  if (s != FAGCN_OK) throw CliFailure(exit_code_of(s), fagcn_last_error());
}

std::string take(char* s) {
  std::string out(s ? s : "");
  fagcn_string_free(s);
  return out;
}

struct DatasetDeleter {
  void operator()(fagcn_dataset* d) const { fagcn_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(fagcn_model* m) const { fagcn_model_free(m); }
};
using DatasetPtr = std::unique_ptr<fagcn_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<fagcn_model, ModelDeleter>;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool quiet = false;
};

void require_file(const std::string& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw CliFailure(kExitInput, std::string(what) + " file not found: '" + path + "'");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure(kExitInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw CliFailure(kExitInput, "invalid JSON in '" + origin + "': " + e.what());
  }
}

std::string digest(const std::string& path) {
  char* out = nullptr;
  check(fagcn_file_digest(path.c_str(), &out));
  return take(out);
}

std::string canonical_config(const std::string& text) {
  char* out = nullptr;
  check(fagcn_config_canonical(text.c_str(), &out));
  return take(out);
}

// Applies --seed on top of a config file.
std::string effective_config(const std::string& text, const GlobalOptions& g) {
  json cfg = parse_json(canonical_config(text), "config");
  if (g.seed) cfg["seed"] = *g.seed;
  return canonical_config(cfg.dump());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string absolute_string(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

// Stages files under temporary names and renames them into place on commit.
class AtomicWriter {
 public:
  AtomicWriter() = default;
  AtomicWriter(const AtomicWriter&) = delete;
  AtomicWriter& operator=(const AtomicWriter&) = delete;
  ~AtomicWriter() {
    if (committed_) return;
    for (const auto& [tmp, dest] : staged_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  static fs::path temp_of(const fs::path& dest) {
    fs::path tmp = dest;
    tmp += ".tmp";
    return tmp;
  }

  // Returns the temporary path the caller should write to.
  fs::path stage(const fs::path& dest) {
    staged_.emplace_back(temp_of(dest), dest);
    return temp_of(dest);
  }

  void stage_text(const fs::path& dest, const std::string& text) {
    const fs::path tmp = stage(dest);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw CliFailure(kExitInput, "cannot write '" + dest.string() + "'");
  }

  void commit() {
    for (const auto& [tmp, dest] : staged_) {
      std::error_code ec;
      fs::rename(tmp, dest, ec);
      if (ec) throw CliFailure(kExitInput, "cannot move into '" + dest.string() + "': " + ec.message());
    }
    committed_ = true;
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> staged_;
  bool committed_ = false;
};

DatasetPtr load_dataset(const std::string& edges, const std::string& content) {
  require_file(edges, "edges");
  require_file(content, "content");
  fagcn_dataset* ds = nullptr;
  check(fagcn_dataset_load(edges.c_str(), content.c_str(), &ds));
  return DatasetPtr(ds);
}

DatasetPtr load_dataset_for(const fagcn_model* model, const std::string& edges,
                            const std::string& content) {
  require_file(edges, "edges");
  require_file(content, "content");
  fagcn_dataset* ds = nullptr;
  check(fagcn_dataset_load_for_model(model, edges.c_str(), content.c_str(), &ds));
  return DatasetPtr(ds);
}

ModelPtr load_model(const std::string& path) {
  require_file(path, "checkpoint");
  fagcn_model* m = nullptr;
  check(fagcn_model_load(path.c_str(), &m));
  return ModelPtr(m);
}

json data_digests(const fagcn_dataset* ds, const std::string& config, const std::string& edges,
                  const std::string& content) {
  char* eff = nullptr;
  check(fagcn_dataset_content_digest(ds, config.c_str(), &eff));
  return json{{"edges", {{"path", absolute_string(edges)}, {"sha256", digest(edges)}}},
              {"content", {{"path", absolute_string(content)}, {"sha256", digest(content)}}},
              {"effective_content_sha256", take(eff)}};
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string manifest;
  std::string edges;
  std::string content;
  std::string out_dir;
};

void epoch_progress(size_t epoch, double loss, void* user) {
  const auto* g = static_cast<const GlobalOptions*>(user);
  if (g->quiet) return;
  std::fprintf(stderr, "epoch %zu loss %.6f\n", epoch, loss);
}

int cmd_train(const TrainArgs& a, const GlobalOptions& g) {
  std::string config_text;
  std::string edges = a.edges;
  std::string content = a.content;
  std::optional<json> replay;
  if (!a.manifest.empty()) {
    require_file(a.manifest, "manifest");
    replay = parse_json(read_text(a.manifest), a.manifest);
    try {
      config_text = replay->at("config").dump();
      if (edges.empty()) edges = replay->at("data").at("edges").at("path").get<std::string>();
      if (content.empty()) content = replay->at("data").at("content").at("path").get<std::string>();
    } catch (const json::exception& e) {
      throw CliFailure(kExitInput, "malformed manifest '" + a.manifest + "': " + e.what());
    }
  } else {
    if (a.config.empty()) throw CliFailure(kExitInput, "train needs --config or --manifest");
    require_file(a.config, "config");
    config_text = read_text(a.config);
  }
  if (edges.empty() || content.empty()) {
    throw CliFailure(kExitInput, "train needs --edges and --content");
  }
  const std::string config = effective_config(config_text, g);
  DatasetPtr ds = load_dataset(edges, content);
  const json digests = data_digests(ds.get(), config, edges, content);
  if (replay) {
    for (const char* key : {"edges", "content"}) {
      const auto& recorded = (*replay)["data"][key]["sha256"];
      if (recorded.is_string() && recorded != digests[key]["sha256"]) {
        throw CliFailure(kExitData, std::string(key) + " file differs from the manifest: '" +
                                        digests[key]["path"].get<std::string>() + "'");
      }
    }
  }

  fagcn_model* raw = nullptr;
  check(fagcn_train(config.c_str(), ds.get(), epoch_progress, const_cast<GlobalOptions*>(&g), &raw));
  ModelPtr model(raw);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw CliFailure(kExitInput, "cannot create '" + a.out_dir + "': " + ec.message());
  const fs::path dir(a.out_dir);
  const fs::path ckpt = dir / "checkpoint.bin";
  const fs::path history = dir / "history.csv";
  const fs::path manifest = dir / "manifest.json";

  AtomicWriter writer;
  check(fagcn_model_save(model.get(), writer.stage(ckpt).c_str()));
  char* csv = nullptr;
  check(fagcn_model_history_csv(model.get(), &csv));
  writer.stage_text(history, take(csv));

  const json cfg = json::parse(config);
  json m;
  m["command"] = "train";
  m["tool_version"] = fagcn_version();
  m["config"] = cfg;
  m["data"] = digests;
  m["seeds"] = json::array({cfg["seed"]});
  m["outputs"] = {{"checkpoint", absolute_string(ckpt.string())},
                  {"history", absolute_string(history.string())}};
  m["outputs_sha256"] = {{"checkpoint", digest(AtomicWriter::temp_of(ckpt).string())},
                         {"history", digest(AtomicWriter::temp_of(history).string())}};
  m["test_accuracy"] = fagcn_model_test_accuracy(model.get());
  m["train_accuracy"] = fagcn_model_train_accuracy(model.get());
  m["wall_clock"] = {{"finished_utc", utc_timestamp()},
                     {"train_seconds", fagcn_model_train_seconds(model.get())}};
  writer.stage_text(manifest, m.dump(2) + "\n");
  writer.commit();

  if (!g.quiet) {
    std::printf("test_accuracy=%.4f\n", fagcn_model_test_accuracy(model.get()));
    std::printf("wrote %s\n", dir.string().c_str());
  }
  return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string edges;
  std::string content;
  std::optional<std::uint64_t> split_seed;
};

int cmd_eval(const EvalArgs& a, const GlobalOptions& g) {
  ModelPtr model = load_model(a.checkpoint);
  DatasetPtr ds = load_dataset_for(model.get(), a.edges, a.content);
  std::uint64_t split_seed = 0;
  if (a.split_seed) {
    split_seed = *a.split_seed;
  } else if (g.seed) {
    split_seed = *g.seed;
  } else {
    char* cfg = nullptr;
    check(fagcn_model_config(model.get(), &cfg));
    split_seed = json::parse(take(cfg)).at("seed").get<std::uint64_t>();
  }
  double acc = 0.0;
  check(fagcn_evaluate(model.get(), ds.get(), split_seed, &acc));
  std::printf("accuracy=%.4f\n", acc);
  return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::string spec;
  std::string out;
  std::string edges;
  std::string content;
};

int cmd_sweep(const SweepArgs& a, const GlobalOptions& g) {
  require_file(a.config, "config");
  require_file(a.spec, "sweep spec");
  const std::string config = effective_config(read_text(a.config), g);
  const std::string spec_text = read_text(a.spec);
  const json spec = parse_json(spec_text, a.spec);
  const fs::path base = fs::path(a.spec).parent_path();
  auto data_path = [&](const std::string& override_path, const char* key) {
    if (!override_path.empty()) return override_path;
    if (!spec.contains(key) || !spec[key].is_string()) {
      throw CliFailure(kExitInput, std::string("sweep needs --") + key + " or a \"" + key +
                                       "\" entry in the spec");
    }
    fs::path p = spec[key].get<std::string>();
    return (p.is_relative() ? base / p : p).string();
  };
  const std::string edges = data_path(a.edges, "edges");
  const std::string content = data_path(a.content, "content");
  DatasetPtr ds = load_dataset(edges, content);

  char* csv = nullptr;
  check(fagcn_sweep(config.c_str(), spec_text.c_str(), ds.get(), g.threads, &csv));
  const std::string table = take(csv);

  const fs::path out(a.out);
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
  }
  fs::path manifest_path = out;
  manifest_path += ".manifest.json";

  // Seeds actually used; the spec falls back to the config seed.
  json seeds = spec.contains("seeds") ? spec["seeds"] : json::array({json::parse(config)["seed"]});
  json m;
  m["command"] = "sweep";
  m["tool_version"] = fagcn_version();
  m["config"] = json::parse(config);
  m["sweep"] = spec;
  m["data"] = data_digests(ds.get(), config, edges, content);
  m["seeds"] = seeds;
  m["threads"] = g.threads;
  m["outputs"] = {{"csv", absolute_string(out.string())}};
  m["wall_clock"] = {{"finished_utc", utc_timestamp()}};

  AtomicWriter writer;
  writer.stage_text(out, table);
  m["outputs_sha256"] = {{"csv", digest(AtomicWriter::temp_of(out).string())}};
  writer.stage_text(manifest_path, m.dump(2) + "\n");
  writer.commit();
  if (!g.quiet) std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

// ---- export-attention -----------------------------------------------------

struct ExportArgs {
  std::string checkpoint;
  std::string edges;
  std::string content;
  std::string node;
  std::string out;
};

int cmd_export(const ExportArgs& a, const GlobalOptions& g) {
  ModelPtr model = load_model(a.checkpoint);
  DatasetPtr ds = load_dataset_for(model.get(), a.edges, a.content);
  char* record = nullptr;
  check(fagcn_export_attention(model.get(), ds.get(), a.node.c_str(), &record));
  AtomicWriter writer;
  writer.stage_text(a.out, take(record) + "\n");
  writer.commit();
  if (!g.quiet) std::printf("wrote %s\n", a.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-attention graph convolution for noisy node content"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.set_version_flag("--version", std::string(fagcn_version()));

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train one model and write checkpoint, history and manifest");
  auto* cfg_opt = train->add_option("--config", ta.config, "Experiment config (JSON)");
  train->add_option("--manifest", ta.manifest, "Replay the config and data of an earlier run")
      ->excludes(cfg_opt);
  train->add_option("--edges", ta.edges, "Edge list");
  train->add_option("--content", ta.content, "Node content file");
  train->add_option("--out-dir", ta.out_dir, "Output directory")->required();

  EvalArgs ea;
  std::uint64_t split_seed = 0;
  auto* eval = app.add_subcommand("eval", "Accuracy of a checkpoint on held-out nodes");
  eval->add_option("--checkpoint", ea.checkpoint)->required();
  eval->add_option("--edges", ea.edges)->required();
  eval->add_option("--content", ea.content)->required();
  auto* split_opt = eval->add_option("--split-seed", split_seed, "Split seed (default: config seed)");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Run a noise or parameter sweep to CSV");
  sweep->add_option("--config", sa.config, "Base experiment config (JSON)")->required();
  sweep->add_option("--spec", sa.spec, "Sweep description (JSON)")->required();
  sweep->add_option("--out", sa.out, "Output CSV")->required();
  sweep->add_option("--edges", sa.edges, "Edge list (overrides the spec)");
  sweep->add_option("--content", sa.content, "Node content (overrides the spec)");

  ExportArgs xa;
  auto* exp = app.add_subcommand("export-attention", "Dump attention weights for one node");
  exp->add_option("--checkpoint", xa.checkpoint)->required();
  exp->add_option("--edges", xa.edges)->required();
  exp->add_option("--content", xa.content)->required();
  exp->add_option("--node", xa.node, "Center node id")->required();
  exp->add_option("--out", xa.out, "Output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (*seed_opt) g.seed = seed;
  if (*split_opt) ea.split_seed = split_seed;

  try {
    if (*train) return cmd_train(ta, g);
    if (*eval) return cmd_eval(ea, g);
    if (*sweep) return cmd_sweep(sa, g);
    if (*exp) return cmd_export(xa, g);
  } catch (const CliFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
