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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "corpus.hpp"
#include "gradcheck.hpp"
#include "graph.hpp"
#include "model.hpp"

namespace fagcn {

/// First and second moment accumulators mirroring the parameter list.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

/// One bias-corrected Adam update reading each parameter's grad slot.
/// Throws NumericError naming the first parameter with a non-finite gradient.
void adam_step(const std::vector<NamedParam>& params, AdamState& state, double lr);

struct TrainHistory {
  std::vector<double> loss;  // one entry per epoch, before that epoch's update
  double test_accuracy = 0.0;
  double train_accuracy = 0.0;
  double seconds = 0.0;

  /// "epoch,loss" rows with round-trip precision; wall-clock excluded.
  std::string to_csv() const;
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

/// Full-graph training for cfg.epochs epochs. `corpus` is used as given,
/// so corrupt it beforehand for noise experiments.
TrainResult train(const ExperimentConfig& cfg, const Graph& graph, const ContentCorpus& corpus,
                  std::size_t vocab_size, const DatasetSplit& split,
                  const EpochCallback& on_epoch = nullptr);

/// Argmax of each row, ties to the lowest class id.
std::vector<std::size_t> predict(ModelParams& params, const ExperimentConfig& cfg,
                                 const ModelInputs& inputs);

/// Fraction of `nodes` whose predicted class equals the label. Always runs
/// in evaluation mode regardless of cfg's dropout settings.
double evaluate(ModelParams& params, const ExperimentConfig& cfg, const ModelInputs& inputs,
                std::span<const std::size_t> nodes);
double evaluate(ModelParams& params, const ExperimentConfig& cfg, const Graph& graph,
                const ContentCorpus& corpus, std::size_t vocab_size,
                std::span<const std::size_t> nodes);

/// The split a given seed produces for n nodes.
DatasetSplit split_for_seed(std::size_t n, double p, std::uint64_t seed);

/// One repetition: corrupt the clean corpus per cfg's noise settings, draw
/// the split, initialize, train and evaluate, all from `cfg.seed`.
TrainResult run_trial(const ExperimentConfig& cfg, const Graph& graph,
                      const ContentCorpus& clean_corpus, std::size_t vocab_size);

struct RepeatResult {
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

RepeatResult summarize(std::vector<double> accuracies);

/// run_trial once per seed; seeds may run on up to `threads` workers.
RepeatResult repeat_experiment(const ExperimentConfig& cfg, const Graph& graph,
                               const ContentCorpus& clean_corpus, std::size_t vocab_size,
                               std::span<const std::uint64_t> seeds, unsigned threads = 1);

/// "80.39 ± 0.60": percentages with two decimals.
std::string format_mean_std(double mean, double stddev);

/// Calls fn(0..count-1) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fagcn
