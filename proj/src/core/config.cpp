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

#include "config.hpp"

#include <set>

#include "errors.hpp"
#include "json.hpp"

namespace fagcn {

using nlohmann::json;

std::string_view to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::kNone:
      return "none";
    case ModelVariant::kSelf:
      return "self";
    case ModelVariant::kContext:
      return "context";
    case ModelVariant::kBaselineGcn:
      return "baseline_gcn";
  }
  return "none";
}

std::optional<ModelVariant> parse_model_variant(std::string_view name) {
  if (name == "none") return ModelVariant::kNone;
  if (name == "self") return ModelVariant::kSelf;
  if (name == "context") return ModelVariant::kContext;
  if (name == "baseline_gcn") return ModelVariant::kBaselineGcn;
  return std::nullopt;
}

std::optional<AttentionVariant> attention_of(ModelVariant v) {
  switch (v) {
    case ModelVariant::kNone:
      return AttentionVariant::kNone;
    case ModelVariant::kSelf:
      return AttentionVariant::kSelf;
    case ModelVariant::kContext:
      return AttentionVariant::kContext;
    case ModelVariant::kBaselineGcn:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(NoiseProtocol p) {
  switch (p) {
    case NoiseProtocol::kNone:
      return "none";
    case NoiseProtocol::kInject:
      return "inject";
    case NoiseProtocol::kReplace:
      return "replace";
  }
  return "none";
}

std::optional<NoiseProtocol> parse_noise_protocol(std::string_view name) {
  if (name == "none") return NoiseProtocol::kNone;
  if (name == "inject") return NoiseProtocol::kInject;
  if (name == "replace") return NoiseProtocol::kReplace;
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

bool is_probability(double p) { return p >= 0.0 && p < 1.0; }

std::size_t get_count(const json& v, const std::string& key) {
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
          key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

double get_real(const json& v, const std::string& key) {
  require(v.is_number(), key + " must be a number");
  return v.get<double>();
}

}  // namespace

void ExperimentConfig::validate() const {
  require(d_i >= 1 && d_o >= 1 && d_h >= 1, "dimensions d_i, d_o, d_h must be at least 1");
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(is_probability(dropout_lstm), "dropout_lstm must lie in [0, 1)");
  require(is_probability(dropout_gcn), "dropout_gcn must lie in [0, 1)");
  require(lambda1 >= 0.0 && lambda2 >= 0.0, "lambda1 and lambda2 must be non-negative");
  require(lr > 0.0, "lr must be positive");
  require(noise_ratio >= 0.0, "noise_ratio must be non-negative");
  if (noise_protocol == NoiseProtocol::kInject) require(noise_ratio <= 1.0, "inject ratio above 1");
  if (noise_protocol == NoiseProtocol::kReplace) {
    require(noise_ratio <= 0.5, "replace ratio above 0.5");
  }
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  require(doc.is_object(), "top level must be an object");
  ExperimentConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "d_i") c.d_i = get_count(v, key);
    else if (key == "d_o") c.d_o = get_count(v, key);
    else if (key == "d_h") c.d_h = get_count(v, key);
    else if (key == "p") c.p = get_real(v, key);
    else if (key == "dropout_lstm") c.dropout_lstm = get_real(v, key);
    else if (key == "dropout_gcn") c.dropout_gcn = get_real(v, key);
    else if (key == "lambda1") c.lambda1 = get_real(v, key);
    else if (key == "lambda2") c.lambda2 = get_real(v, key);
    else if (key == "lr") c.lr = get_real(v, key);
    else if (key == "epochs") c.epochs = get_count(v, key);
    else if (key == "seed") c.seed = get_count(v, key);
    else if (key == "layer1_normalize") {
      require(v.is_boolean(), key + " must be a boolean");
      c.layer1_normalize = v.get<bool>();
    } else if (key == "variant") {
      require(v.is_string(), key + " must be a string");
      auto parsed = parse_model_variant(v.get<std::string>());
      require(parsed.has_value(), "unknown variant '" + v.get<std::string>() + "'");
      c.variant = *parsed;
    } else if (key == "noise_protocol") {
      require(v.is_string(), key + " must be a string");
      auto parsed = parse_noise_protocol(v.get<std::string>());
      require(parsed.has_value(), "unknown noise_protocol '" + v.get<std::string>() + "'");
      c.noise_protocol = *parsed;
    } else if (key == "noise_ratio") {
      c.noise_ratio = get_real(v, key);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json() const {
  json doc = {
      {"d_i", d_i},
      {"d_o", d_o},
      {"d_h", d_h},
      {"p", p},
      {"dropout_lstm", dropout_lstm},
      {"dropout_gcn", dropout_gcn},
      {"lambda1", lambda1},
      {"lambda2", lambda2},
      {"lr", lr},
      {"epochs", epochs},
      {"seed", seed},
      {"variant", std::string(to_string(variant))},
      {"layer1_normalize", layer1_normalize},
      {"noise_protocol", std::string(to_string(noise_protocol))},
      {"noise_ratio", noise_ratio},
  };
  return doc.dump();
}

ExperimentConfig ExperimentConfig::dataset_defaults(std::string_view dataset) {
  ExperimentConfig c;
  if (dataset == "citeseer") {
    c.d_h = 6;
  } else if (dataset == "cora") {
    c.d_h = 7;
  } else if (dataset == "dblp") {
    c.d_h = 4;
    c.lambda1 = 5e-4;
  } else {
    throw ConfigError("no published defaults for dataset '" + std::string(dataset) + "'");
  }
  return c;
}

}  // namespace fagcn
