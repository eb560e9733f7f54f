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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "model.hpp"

namespace fagcn {

struct TokenWeight {
  std::string token;
  double alpha = 0.0;
  std::size_t position = 0;  // index within the neighbour's content
};

struct NeighborAttention {
  std::string node_id;
  std::vector<TokenWeight> tokens;  // descending alpha, ties by position
};

/// Feature-attention weights a center node assigns to each member of its
/// closed neighbourhood (itself included), in ascending node order.
struct AttentionExport {
  std::string center_id;
  ModelVariant variant = ModelVariant::kContext;
  std::vector<NeighborAttention> neighbors;

  std::string to_json() const;
};

/// Evaluation-mode weights on `ds`'s content, after applying the config's noise.
/// Throws ConfigError for the baseline GCN, which has no feature attention.
AttentionExport export_attention(ModelParams& params, const ExperimentConfig& cfg,
                                 const Dataset& ds, std::size_t center);

}  // namespace fagcn
