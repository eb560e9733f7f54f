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

#include "trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "errors.hpp"
#include "noise.hpp"

namespace fagcn {

void adam_step(const std::vector<NamedParam>& params, AdamState& state, double lr) {
  if (state.first_moment.empty()) {
    for (const NamedParam& p : params) {
      state.first_moment.emplace_back(p.matrix->size(), 0.0);
      state.second_moment.emplace_back(p.matrix->size(), 0.0);
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state tracks " +
                     std::to_string(state.first_moment.size()) + " parameters, given " +
                     std::to_string(params.size()));
  }
  for (const NamedParam& p : params) {
    for (double g : p.matrix->grad()) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient in " + p.name);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto values = params[k].matrix->values();
    auto grad = params[k].matrix->grad();
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    if (m.size() != values.size()) throw ShapeError("adam_step: shape changed for " + params[k].name);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

std::string TrainHistory::to_csv() const {
  std::string out = "epoch,loss\n";
  char buf[64];
  for (std::size_t e = 0; e < loss.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", e + 1, loss[e]);
    out += buf;
  }
  return out;
}

TrainResult train(const ExperimentConfig& cfg, const Graph& graph, const ContentCorpus& corpus,
                  std::size_t vocab_size, const DatasetSplit& split,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const ModelInputs inputs = ModelInputs::build(graph, corpus, vocab_size, cfg.variant);
  const LabelMatrix labels = make_labels(corpus, split.train_idx);

  Rng init_rng = Rng::stream(cfg.seed, Stream::kInit);
  Rng dropout_rng = Rng::stream(cfg.seed, Stream::kDropout);
  TrainResult result{init_params(cfg, vocab_size, corpus.num_classes, init_rng), {}};
  ModelParams& params = result.params;
  const std::vector<NamedParam> named = params.named();
  AdamState adam;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    params.zero_grad();
    Tape tape;
    const ForwardOptions opts = ForwardOptions::training_mode(cfg, dropout_rng);
    Var objective_var = objective(tape, params, inputs, labels, cfg, opts);
    const double value = tape.value(objective_var).values()[0];
    if (!std::isfinite(value)) {
      throw NumericError("loss became non-finite at epoch " + std::to_string(epoch + 1));
    }
    tape.backward(objective_var);
    adam_step(named, adam, cfg.lr);
    result.history.loss.push_back(value);
    if (on_epoch) on_epoch(epoch + 1, value);
  }

  result.history.train_accuracy = evaluate(params, cfg, inputs, split.train_idx);
  if (!split.test_idx.empty()) {
    result.history.test_accuracy = evaluate(params, cfg, inputs, split.test_idx);
  }
  result.history.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<std::size_t> predict(ModelParams& params, const ExperimentConfig& cfg,
                                 const ModelInputs& inputs) {
  Tape tape;
  const BoundParams bp = bind(tape, params);
  const DenseMatrix& z =
      tape.value(forward(tape, bp, inputs, params.variant, ForwardOptions::evaluation(cfg)));
  if (!z.all_finite()) throw NumericError("non-finite class probabilities");
  std::vector<std::size_t> out(z.rows());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < z.cols(); ++c)
      if (z(r, c) > z(r, best)) best = c;
    out[r] = best;
  }
  return out;
}

double evaluate(ModelParams& params, const ExperimentConfig& cfg, const ModelInputs& inputs,
                std::span<const std::size_t> nodes) {
  if (nodes.empty()) throw ConfigError("evaluate: empty node set");
  const std::vector<std::size_t> predicted = predict(params, cfg, inputs);
  std::size_t correct = 0;
  for (std::size_t d : nodes) {
    if (d >= predicted.size()) throw DataError("evaluate: node index out of range");
    if (predicted[d] == inputs.corpus->labels[d]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

double evaluate(ModelParams& params, const ExperimentConfig& cfg, const Graph& graph,
                const ContentCorpus& corpus, std::size_t vocab_size,
                std::span<const std::size_t> nodes) {
  const ModelInputs inputs = ModelInputs::build(graph, corpus, vocab_size, params.variant);
  return evaluate(params, cfg, inputs, nodes);
}

DatasetSplit split_for_seed(std::size_t n, double p, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, Stream::kSplit);
  return split(n, p, rng);
}

TrainResult run_trial(const ExperimentConfig& cfg, const Graph& graph,
                      const ContentCorpus& clean_corpus, std::size_t vocab_size) {
  const NoiseSpec noise{cfg.noise_protocol, cfg.noise_ratio, cfg.seed};
  const ContentCorpus corpus = apply_noise(clean_corpus, vocab_size, noise);
  const DatasetSplit s = split_for_seed(corpus.num_nodes(), cfg.p, cfg.seed);
  return train(cfg, graph, corpus, vocab_size, s);
}

RepeatResult summarize(std::vector<double> accuracies) {
  RepeatResult r;
  r.accuracies = std::move(accuracies);
  if (r.accuracies.empty()) return r;
  double sum = 0.0;
  for (double a : r.accuracies) sum += a;
  r.mean = sum / static_cast<double>(r.accuracies.size());
  double sq = 0.0;
  for (double a : r.accuracies) sq += (a - r.mean) * (a - r.mean);
  r.stddev = std::sqrt(sq / static_cast<double>(r.accuracies.size()));
  return r;
}

RepeatResult repeat_experiment(const ExperimentConfig& cfg, const Graph& graph,
                               const ContentCorpus& clean_corpus, std::size_t vocab_size,
                               std::span<const std::uint64_t> seeds, unsigned threads) {
  if (seeds.size() < 2) throw ConfigError("repeat_experiment needs at least two seeds");
  std::vector<double> acc(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t k) {
    ExperimentConfig c = cfg;
    c.seed = seeds[k];
    acc[k] = run_trial(c, graph, clean_corpus, vocab_size).history.test_accuracy;
  });
  return summarize(std::move(acc));
}

std::string format_mean_std(double mean, double stddev) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", 100.0 * mean, 100.0 * stddev);
  return buf;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fagcn
