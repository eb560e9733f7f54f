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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "corpus.hpp"
#include "graph.hpp"

namespace fagcn {

enum class SweepAxis { kNoiseInject, kNoiseReplace, kInputDim, kOutputDim, kHiddenDim, kLabelFraction };

std::string_view to_string(SweepAxis axis);

/// One aggregated cell of a sweep.
struct SweepRow {
  SweepAxis axis = SweepAxis::kNoiseInject;
  double value = 0.0;
  ModelVariant variant = ModelVariant::kContext;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::vector<std::uint64_t> seeds;
};

/// Sweep description file:
///   {"axis": "noise-replace", "values": [0.1, 0.2], "variants": ["context"],
///    "seeds": [1, 2, 3], "edges": "graph.edges", "content": "graph.content"}
/// `variants` defaults to the config's variant, `seeds` to the config's seed.
/// Relative data paths are resolved against `base_dir`.
struct SweepSpec {
  SweepAxis axis = SweepAxis::kNoiseInject;
  std::vector<double> values;
  std::vector<ModelVariant> variants;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path edges;
  std::filesystem::path content;

  static SweepSpec from_json(std::string_view text, const std::filesystem::path& base_dir = {});
};

/// Applies one axis value to a config (noise axes set protocol and ratio).
ExperimentConfig with_axis_value(ExperimentConfig cfg, SweepAxis axis, double value);

/// Every (value, variant) cell trained and evaluated once per seed, in axis
/// order; cells may run on up to `threads` workers.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const Graph& graph,
                                const ContentCorpus& clean_corpus, std::size_t vocab_size,
                                SweepAxis axis, const std::vector<double>& values,
                                const std::vector<ModelVariant>& variants,
                                const std::vector<std::uint64_t>& seeds, unsigned threads = 1);

/// Noise axes: robustness curve for one protocol.
std::vector<SweepRow> noise_sweep(const ExperimentConfig& base, const Graph& graph,
                                  const ContentCorpus& clean_corpus, std::size_t vocab_size,
                                  NoiseProtocol protocol, const std::vector<double>& ratios,
                                  const std::vector<ModelVariant>& variants,
                                  const std::vector<std::uint64_t>& seeds, unsigned threads = 1);

/// Noise rows: `protocol,ratio,variant,mean_accuracy,std_accuracy,seeds`.
/// Parameter rows: `axis,value,variant,mean_accuracy,std_accuracy,seeds`.
/// Accuracies use four decimals; seeds are ';'-separated.
std::string sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis);

}  // namespace fagcn
