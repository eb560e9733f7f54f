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

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "fixtures.hpp"
#include "trainer.hpp"

using namespace fagcn;
using fagcn::testing::eight_node_fixture;
using fagcn::testing::four_node_fixture;
using fagcn::testing::small_config;

TEST(Adam, ZeroGradientsAreAFixedPoint) {
  DenseMatrix p = DenseMatrix::from_rows({{0.5, -1.0}});
  p.zero_grad();
  const std::vector<NamedParam> named{{"p", &p}};
  AdamState s;
  for (int k = 0; k < 3; ++k) adam_step(named, s, 0.1);
  EXPECT_EQ(p, DenseMatrix::from_rows({{0.5, -1.0}}));
  EXPECT_EQ(s.step, 3u);
  for (double m : s.first_moment[0]) EXPECT_EQ(m, 0.0);
  for (double v : s.second_moment[0]) EXPECT_EQ(v, 0.0);
}

TEST(Adam, FirstStepHasMagnitudeLr) {
  const double lr = 2e-3, g = 0.37;
  DenseMatrix p = DenseMatrix::from_rows({{1.0}});
  p.grad()[0] = g;
  const std::vector<NamedParam> named{{"p", &p}};
  AdamState s;
  adam_step(named, s, lr);
  EXPECT_NEAR(p(0, 0), 1.0 - lr * g / (g + 1e-8), 1e-15);
  EXPECT_NEAR(1.0 - p(0, 0), lr, 1e-10);

  // A constant gradient keeps the bias-corrected step at lr.
  for (int k = 0; k < 4; ++k) {
    const double before = p(0, 0);
    adam_step(named, s, lr);
    EXPECT_NEAR(before - p(0, 0), lr, 1e-10);
  }
}

TEST(Adam, NonFiniteGradientNamesTheGroup) {
  DenseMatrix a(1, 1), b(1, 1);
  a.zero_grad();
  b.grad()[0] = std::numeric_limits<double>::infinity();
  AdamState s;
  try {
    adam_step({{"first", &a}, {"second.w", &b}}, s, 0.1);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("second.w"), std::string::npos);
  }
}

TEST(Train, ZeroEpochsKeepsInitialization) {
  const auto f = four_node_fixture();
  ExperimentConfig cfg = small_config(ModelVariant::kContext);
  cfg.epochs = 0;
  cfg.p = 0.5;
  const TrainResult r =
      train(cfg, f.graph, f.corpus, f.vocab_size, split_for_seed(4, cfg.p, cfg.seed));
  Rng init = Rng::stream(cfg.seed, Stream::kInit);
  ModelParams fresh = init_params(cfg, f.vocab_size, 2, init);
  ModelParams got = r.params;
  const auto a = got.named(), b = fresh.named();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(*a[k].matrix, *b[k].matrix) << a[k].name;
  EXPECT_TRUE(r.history.loss.empty());
}

TEST(Train, HistoryLengthFiniteLossAndDeterminism) {
  const auto f = eight_node_fixture();
  ExperimentConfig cfg = small_config(ModelVariant::kContext);
  cfg.epochs = 25;
  cfg.p = 0.5;
  const DatasetSplit s = split_for_seed(8, cfg.p, 3);
  std::vector<double> seen;
  const TrainResult a =
      train(cfg, f.graph, f.corpus, f.vocab_size, s, [&](std::size_t, double l) { seen.push_back(l); });
  const TrainResult b = train(cfg, f.graph, f.corpus, f.vocab_size, s);
  ASSERT_EQ(a.history.loss.size(), 25u);
  EXPECT_EQ(seen, a.history.loss);
  for (double l : a.history.loss) EXPECT_TRUE(std::isfinite(l));
  EXPECT_EQ(a.history.loss, b.history.loss);
  EXPECT_EQ(a.history.to_csv(), b.history.to_csv());
  ModelParams pa = a.params, pb = b.params;
  const auto na = pa.named(), nb = pb.named();
  for (std::size_t k = 0; k < na.size(); ++k) EXPECT_EQ(*na[k].matrix, *nb[k].matrix);
}

TEST(Train, HistoryCsvFormat) {
  TrainHistory h;
  h.loss = {1.5, 0.25};
  EXPECT_EQ(h.to_csv(), "epoch,loss\n1,1.5\n2,0.25\n");
}

TEST(Train, OverfitsSeparableFixture) {
  const auto f = eight_node_fixture();
  for (ModelVariant v : {ModelVariant::kNone, ModelVariant::kSelf, ModelVariant::kContext}) {
    ExperimentConfig cfg = small_config(v);
    cfg.p = 0.5;
    cfg.seed = 2;
    const DatasetSplit s{fagcn::testing::all_nodes(8), {}};
    const TrainResult r = train(cfg, f.graph, f.corpus, f.vocab_size, s);
    EXPECT_EQ(r.history.train_accuracy, 1.0) << to_string(v);
    EXPECT_LT(r.history.loss.back(), r.history.loss.front());
  }
}

TEST(Evaluate, HandSetOutputs) {
  // No edges and identity first layer: the logits of node i are row i of W1.
  const Graph g(5, {});
  ContentCorpus c{{{0}, {1}, {2}, {3}, {4}}, {0, 1, 2, 1, 0}, 3};
  ExperimentConfig cfg = small_config(ModelVariant::kBaselineGcn);
  cfg.d_h = 5;
  ModelParams p;
  p.variant = ModelVariant::kBaselineGcn;
  p.baseline_w0 = DenseMatrix::identity(5);
  p.baseline_w1 = DenseMatrix::from_rows({{3, 1, 0}, {0, 2, 1}, {1, 0, 0}, {0, 0, 5}, {2, 2, 1}});
  // Predictions: 0, 1, 0, 2, 0 (tie broken towards class 0). Correct: nodes 0, 1, 4.
  const ModelInputs in = ModelInputs::build(g, c, 5, p.variant);
  EXPECT_EQ(predict(p, cfg, in), (std::vector<std::size_t>{0, 1, 0, 2, 0}));
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(evaluate(p, cfg, in, all), 3.0 / 5.0);
  const std::vector<std::size_t> some{1, 2};
  EXPECT_DOUBLE_EQ(evaluate(p, cfg, in, some), 0.5);
  EXPECT_THROW(evaluate(p, cfg, in, std::vector<std::size_t>{}), ConfigError);
}

TEST(Evaluate, UniformRowsTieToClassZero) {
  const auto f = four_node_fixture();
  ExperimentConfig cfg = small_config(ModelVariant::kBaselineGcn);
  Rng rng(1);
  ModelParams p = init_params(cfg, f.vocab_size, 2, rng);
  for (double& v : p.baseline_w0.values()) v = 0.0;
  const std::vector<std::size_t> nodes{0, 1, 2};  // labels 0, 1, 1
  EXPECT_DOUBLE_EQ(evaluate(p, cfg, f.graph, f.corpus, f.vocab_size, nodes), 1.0 / 3.0);
}

TEST(Evaluate, IgnoresDropoutSettings) {
  const auto f = four_node_fixture();
  ExperimentConfig cfg = small_config(ModelVariant::kSelf);
  Rng rng(4);
  ModelParams p = init_params(cfg, f.vocab_size, 2, rng);
  const auto nodes = fagcn::testing::all_nodes(4);
  const double a = evaluate(p, cfg, f.graph, f.corpus, f.vocab_size, nodes);
  cfg.dropout_lstm = 0.9;
  cfg.dropout_gcn = 0.9;
  EXPECT_EQ(evaluate(p, cfg, f.graph, f.corpus, f.vocab_size, nodes), a);
}

TEST(Repeat, StatisticsAndFormatting) {
  const auto f = eight_node_fixture();
  ExperimentConfig cfg = small_config(ModelVariant::kNone);
  cfg.epochs = 10;
  cfg.p = 0.5;
  const std::vector<std::uint64_t> same{4, 4, 4};
  EXPECT_EQ(repeat_experiment(cfg, f.graph, f.corpus, f.vocab_size, same).stddev, 0.0);
  const std::vector<std::uint64_t> five{1, 2, 3, 4, 5};
  const RepeatResult r = repeat_experiment(cfg, f.graph, f.corpus, f.vocab_size, five, 2);
  ASSERT_EQ(r.accuracies.size(), 5u);
  EXPECT_GE(r.mean, 0.0);
  EXPECT_LE(r.mean, 1.0);
  EXPECT_GE(r.stddev, 0.0);
  const RepeatResult serial = repeat_experiment(cfg, f.graph, f.corpus, f.vocab_size, five, 1);
  EXPECT_EQ(serial.accuracies, r.accuracies);
  EXPECT_THROW(repeat_experiment(cfg, f.graph, f.corpus, f.vocab_size, std::vector<std::uint64_t>{1}),
               ConfigError);
}

TEST(Repeat, PopulationStandardDeviation) {
  const RepeatResult r = summarize({0.8, 0.9});
  EXPECT_DOUBLE_EQ(r.mean, 0.85);
  EXPECT_NEAR(r.stddev, 0.05, 1e-15);
  EXPECT_EQ(format_mean_std(0.8039, 0.0060), "80.39 ± 0.60");
}

TEST(ParallelFor, RunsEveryIndexAndPropagatesErrors) {
  std::vector<int> hits(37, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(5, 3, [](std::size_t i) {
                 if (i == 3) throw DataError("boom");
               }),
               DataError);
}

TEST(SplitForSeed, ReproducibleAndDistinctFromInit) {
  EXPECT_EQ(split_for_seed(40, 0.4, 9).train_idx, split_for_seed(40, 0.4, 9).train_idx);
  EXPECT_NE(split_for_seed(40, 0.4, 9).train_idx, split_for_seed(40, 0.4, 10).train_idx);
}
