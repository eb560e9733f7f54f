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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "attention.hpp"

namespace fagcn {

enum class ModelVariant { kNone, kSelf, kContext, kBaselineGcn };

std::string_view to_string(ModelVariant v);
std::optional<ModelVariant> parse_model_variant(std::string_view name);
/// Attention variant behind a feature-attention model; baseline has none.
std::optional<AttentionVariant> attention_of(ModelVariant v);

enum class NoiseProtocol { kNone, kInject, kReplace };

std::string_view to_string(NoiseProtocol p);
std::optional<NoiseProtocol> parse_noise_protocol(std::string_view name);

struct ExperimentConfig {
  std::size_t d_i = 80;
  std::size_t d_o = 80;
  std::size_t d_h = 6;
  double p = 0.4;
  double dropout_lstm = 0.2;
  double dropout_gcn = 0.3;
  double lambda1 = 5e-3;
  double lambda2 = 5e-4;
  double lr = 2e-3;
  std::size_t epochs = 200;
  std::uint64_t seed = 1;
  ModelVariant variant = ModelVariant::kContext;
  bool layer1_normalize = false;
  NoiseProtocol noise_protocol = NoiseProtocol::kNone;
  double noise_ratio = 0.0;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;

  /// Flat JSON object. Missing keys keep their defaults; unknown keys and
  /// wrongly typed values raise ConfigError.
  static ExperimentConfig from_json(std::string_view text);
  /// Canonical form: every key, sorted, compact.
  std::string to_json() const;

  /// Published defaults for "citeseer", "cora" or "dblp".
  static ExperimentConfig dataset_defaults(std::string_view dataset);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

}  // namespace fagcn
