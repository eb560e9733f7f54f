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

#include "attention_export.hpp"

#include <algorithm>

#include "errors.hpp"
#include "json.hpp"
#include "noise.hpp"

namespace fagcn {

std::string AttentionExport::to_json() const {
  nlohmann::json doc;
  doc["center"] = center_id;
  doc["variant"] = std::string(to_string(variant));
  doc["neighbors"] = nlohmann::json::array();
  for (const NeighborAttention& nb : neighbors) {
    nlohmann::json tokens = nlohmann::json::array();
    for (const TokenWeight& w : nb.tokens) {
      tokens.push_back({{"token", w.token}, {"alpha", w.alpha}, {"position", w.position}});
    }
    doc["neighbors"].push_back({{"node", nb.node_id}, {"features", tokens}});
  }
  return doc.dump(2) + "\n";
}

AttentionExport export_attention(ModelParams& params, const ExperimentConfig& cfg,
                                 const Dataset& ds, std::size_t center) {
  const auto attention = attention_of(params.variant);
  if (!attention) throw ConfigError("the baseline GCN has no feature attention to export");
  if (center >= ds.num_nodes()) throw ConfigError("unknown node index " + std::to_string(center));

  const ContentCorpus corpus = apply_noise(ds.content.corpus, ds.vocab_size(),
                                           NoiseSpec{cfg.noise_protocol, cfg.noise_ratio, cfg.seed});
  const ModelInputs inputs = ModelInputs::build(ds.graph, corpus, ds.vocab_size(), params.variant);
  Tape tape;
  const BoundParams bp = bind(tape, params);
  const NodeInputFeatures features = node_input_features(
      tape, bp, inputs, *attention, ForwardOptions::evaluation(cfg), /*keep_alphas=*/true);

  AttentionExport out;
  out.center_id = ds.content.node_ids[center];
  out.variant = params.variant;
  const auto& members = inputs.neighborhoods[center].members;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t m = members[k];
    const DenseMatrix& alpha = tape.value(features.alphas[center][k]);
    NeighborAttention nb;
    nb.node_id = ds.content.node_ids[m];
    for (std::size_t j = 0; j < corpus.contents[m].size(); ++j) {
      nb.tokens.push_back({ds.content.vocabulary.term(corpus.contents[m][j]), alpha(0, j), j});
    }
    std::stable_sort(nb.tokens.begin(), nb.tokens.end(),
                     [](const TokenWeight& a, const TokenWeight& b) { return a.alpha > b.alpha; });
    out.neighbors.push_back(std::move(nb));
  }
  return out;
}

}  // namespace fagcn
