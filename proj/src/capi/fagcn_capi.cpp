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

#include "fagcn/fagcn.h"

#include <openssl/evp.h>

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <utility>

#include "attention_export.hpp"
#include "checkpoint.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "noise.hpp"
#include "sweep.hpp"
#include "trainer.hpp"

struct fagcn_dataset {
  fagcn::Dataset data;
};

struct fagcn_model {
  // evaluate/export bind parameters to a tape, which needs mutable access.
  mutable fagcn::Checkpoint checkpoint;
  fagcn::TrainHistory history;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
fagcn_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return FAGCN_OK;
  } catch (const fagcn::ConfigError& e) {
    g_last_error = e.what();
    return FAGCN_ERR_INPUT;
  } catch (const fagcn::DataError& e) {
    g_last_error = e.what();
    return FAGCN_ERR_DATA;
  } catch (const fagcn::NumericError& e) {
    g_last_error = e.what();
    return FAGCN_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FAGCN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FAGCN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FAGCN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw fagcn::ConfigError(std::string("null argument: ") + what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

fagcn::ContentCorpus effective_corpus(const fagcn::Dataset& ds, const fagcn::ExperimentConfig& c) {
  return fagcn::apply_noise(ds.content.corpus, ds.vocab_size(),
                            fagcn::NoiseSpec{c.noise_protocol, c.noise_ratio, c.seed});
}

}  // namespace

extern "C" {

const char* fagcn_version(void) { return FAGCN_VERSION_STRING; }

const char* fagcn_last_error(void) { return g_last_error.c_str(); }

void fagcn_string_free(char* s) { std::free(s); }

fagcn_status fagcn_config_canonical(const char* config_json, char** out_json) {
  return guarded([&] {
    require(config_json && out_json, "config_json/out_json");
    *out_json = dup_string(fagcn::ExperimentConfig::from_json(config_json).to_json());
  });
}

fagcn_status fagcn_file_digest(const char* path, char** out_hex) {
  return guarded([&] {
    require(path && out_hex, "path/out_hex");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fagcn::ConfigError(std::string("cannot open '") + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    *out_hex = dup_string(sha256_hex(bytes));
  });
}

fagcn_status fagcn_dataset_load(const char* edges_path, const char* content_path,
                                fagcn_dataset** out) {
  return guarded([&] {
    require(edges_path && content_path && out, "edges_path/content_path/out");
    *out = new fagcn_dataset{fagcn::load_dataset(edges_path, content_path)};
  });
}

fagcn_status fagcn_dataset_load_for_model(const fagcn_model* model, const char* edges_path,
                                          const char* content_path, fagcn_dataset** out) {
  return guarded([&] {
    require(model && edges_path && content_path && out, "model/edges_path/content_path/out");
    *out = new fagcn_dataset{
        fagcn::load_dataset(edges_path, content_path, &model->checkpoint.label_names)};
  });
}

void fagcn_dataset_free(fagcn_dataset* ds) { delete ds; }

size_t fagcn_dataset_num_nodes(const fagcn_dataset* ds) { return ds ? ds->data.num_nodes() : 0; }
size_t fagcn_dataset_num_edges(const fagcn_dataset* ds) {
  return ds ? ds->data.graph.num_edges() : 0;
}
size_t fagcn_dataset_vocab_size(const fagcn_dataset* ds) { return ds ? ds->data.vocab_size() : 0; }
size_t fagcn_dataset_num_classes(const fagcn_dataset* ds) {
  return ds ? ds->data.content.corpus.num_classes : 0;
}
size_t fagcn_dataset_skipped_edges(const fagcn_dataset* ds) {
  return ds ? ds->data.skipped_edges : 0;
}

fagcn_status fagcn_dataset_content_digest(const fagcn_dataset* ds, const char* config_json,
                                          char** out_hex) {
  return guarded([&] {
    require(ds && config_json && out_hex, "ds/config_json/out_hex");
    const auto cfg = fagcn::ExperimentConfig::from_json(config_json);
    const fagcn::ContentCorpus corpus = effective_corpus(ds->data, cfg);
    std::string text;
    for (std::size_t i = 0; i < corpus.num_nodes(); ++i) {
      text += ds->data.content.node_ids[i];
      text += '\t';
      text += ds->data.content.label_names[corpus.labels[i]];
      for (std::size_t w : corpus.contents[i]) {
        text += ' ';
        text += ds->data.content.vocabulary.term(w);
      }
      text += '\n';
    }
    *out_hex = dup_string(sha256_hex(text));
  });
}

fagcn_status fagcn_train(const char* config_json, const fagcn_dataset* ds,
                         fagcn_epoch_callback progress, void* user_data, fagcn_model** out) {
  return guarded([&] {
    require(config_json && ds && out, "config_json/ds/out");
    const auto cfg = fagcn::ExperimentConfig::from_json(config_json);
    const fagcn::Dataset& d = ds->data;
    const fagcn::ContentCorpus corpus = effective_corpus(d, cfg);
    const fagcn::DatasetSplit split = fagcn::split_for_seed(d.num_nodes(), cfg.p, cfg.seed);
    fagcn::EpochCallback cb;
    if (progress) cb = [&](std::size_t e, double l) { progress(e, l, user_data); };
    fagcn::TrainResult r = fagcn::train(cfg, d.graph, corpus, d.vocab_size(), split, cb);

    auto* model = new fagcn_model;
    model->checkpoint.config = cfg;
    model->checkpoint.params = std::move(r.params);
    model->checkpoint.label_names = d.content.label_names;
    model->checkpoint.vocab_size = d.vocab_size();
    model->checkpoint.num_nodes = d.num_nodes();
    for (fagcn::NamedParam& p : model->checkpoint.params.named()) p.matrix->drop_grad();
    model->history = std::move(r.history);
    *out = model;
  });
}

void fagcn_model_free(fagcn_model* model) { delete model; }

fagcn_status fagcn_model_save(const fagcn_model* model, const char* path) {
  return guarded([&] {
    require(model && path, "model/path");
    fagcn::save_checkpoint(model->checkpoint, path);
  });
}

fagcn_status fagcn_model_load(const char* path, fagcn_model** out) {
  return guarded([&] {
    require(path && out, "path/out");
    auto* model = new fagcn_model;
    try {
      model->checkpoint = fagcn::load_checkpoint(path);
    } catch (...) {
      delete model;
      throw;
    }
    *out = model;
  });
}

fagcn_status fagcn_model_config(const fagcn_model* model, char** out_json) {
  return guarded([&] {
    require(model && out_json, "model/out_json");
    *out_json = dup_string(model->checkpoint.config.to_json());
  });
}

fagcn_status fagcn_model_history_csv(const fagcn_model* model, char** out_csv) {
  return guarded([&] {
    require(model && out_csv, "model/out_csv");
    *out_csv = dup_string(model->history.to_csv());
  });
}

double fagcn_model_test_accuracy(const fagcn_model* model) {
  return model ? model->history.test_accuracy : 0.0;
}
double fagcn_model_train_accuracy(const fagcn_model* model) {
  return model ? model->history.train_accuracy : 0.0;
}
double fagcn_model_train_seconds(const fagcn_model* model) {
  return model ? model->history.seconds : 0.0;
}

fagcn_status fagcn_evaluate(const fagcn_model* model, const fagcn_dataset* ds,
                            uint64_t split_seed, double* accuracy) {
  return guarded([&] {
    require(model && ds && accuracy, "model/ds/accuracy");
    fagcn::Checkpoint& ck = model->checkpoint;
    const fagcn::Dataset& d = ds->data;
    fagcn::check_compatible(ck, d.num_nodes(), d.vocab_size(), d.content.corpus.num_classes);
    const fagcn::ContentCorpus corpus = effective_corpus(d, ck.config);
    const fagcn::DatasetSplit split =
        fagcn::split_for_seed(d.num_nodes(), ck.config.p, split_seed);
    *accuracy = fagcn::evaluate(ck.params, ck.config, d.graph, corpus, d.vocab_size(),
                                split.test_idx);
  });
}

fagcn_status fagcn_export_attention(const fagcn_model* model, const fagcn_dataset* ds,
                                    const char* node_id, char** out_json) {
  return guarded([&] {
    require(model && ds && node_id && out_json, "model/ds/node_id/out_json");
    fagcn::Checkpoint& ck = model->checkpoint;
    const fagcn::Dataset& d = ds->data;
    fagcn::check_compatible(ck, d.num_nodes(), d.vocab_size(), d.content.corpus.num_classes);
    const std::size_t index = d.index_of(node_id);
    if (index == std::string::npos) {
      throw fagcn::ConfigError(std::string("unknown node id '") + node_id + "'");
    }
    *out_json = dup_string(fagcn::export_attention(ck.params, ck.config, d, index).to_json());
  });
}

fagcn_status fagcn_sweep(const char* config_json, const char* sweep_json, const fagcn_dataset* ds,
                         unsigned threads, char** out_csv) {
  return guarded([&] {
    require(config_json && sweep_json && ds && out_csv, "config_json/sweep_json/ds/out_csv");
    const auto cfg = fagcn::ExperimentConfig::from_json(config_json);
    const auto spec = fagcn::SweepSpec::from_json(sweep_json);
    const std::vector<fagcn::ModelVariant> variants =
        spec.variants.empty() ? std::vector<fagcn::ModelVariant>{cfg.variant} : spec.variants;
    const std::vector<std::uint64_t> seeds =
        spec.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : spec.seeds;
    const fagcn::Dataset& d = ds->data;
    const auto rows = fagcn::run_sweep(cfg, d.graph, d.content.corpus, d.vocab_size(), spec.axis,
                                       spec.values, variants, seeds, threads);
    *out_csv = dup_string(fagcn::sweep_csv(rows, spec.axis));
  });
}

}  // extern "C"
