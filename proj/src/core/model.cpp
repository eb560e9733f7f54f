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

#include "model.hpp"

#include <cmath>

#include "errors.hpp"

namespace fagcn {

std::vector<NamedParam> ModelParams::named() {
  std::vector<NamedParam> out;
  if (variant == ModelVariant::kBaselineGcn) {
    out.push_back({"baseline.w0", &baseline_w0});
    out.push_back({"baseline.w1", &baseline_w1});
    return out;
  }
  out.push_back({"embeddings", &embeddings});
  for (NamedParam& p : lstm_fwd.named("lstm_fwd")) out.push_back(p);
  for (NamedParam& p : lstm_bwd.named("lstm_bwd")) out.push_back(p);
  if (attention.variant == AttentionVariant::kSelf) out.push_back({"attention.w_self", &attention.w_self});
  if (attention.variant == AttentionVariant::kContext) {
    out.push_back({"attention.w_context", &attention.w_context});
  }
  out.push_back({"gcn.w0", &w0});
  out.push_back({"gcn.w1", &w1});
  return out;
}

void ModelParams::zero_grad() {
  for (NamedParam& p : named()) p.matrix->zero_grad();
}

namespace {

DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double range, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& x : m.values()) x = rng.uniform(-range, range);
  return m;
}

}  // namespace

ModelParams init_params(const ExperimentConfig& cfg, std::size_t vocab_size,
                        std::size_t num_classes, Rng& rng) {
  if (vocab_size == 0 || num_classes == 0) {
    throw DataError("init_params: empty vocabulary or no classes");
  }
  ModelParams p;
  p.variant = cfg.variant;
  auto fan = [](std::size_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); };
  if (cfg.variant == ModelVariant::kBaselineGcn) {
    p.baseline_w0 = uniform_matrix(vocab_size, cfg.d_h, fan(vocab_size), rng);
    p.baseline_w1 = uniform_matrix(cfg.d_h, num_classes, fan(cfg.d_h), rng);
    return p;
  }
  p.embeddings = init_embeddings(vocab_size, cfg.d_i, rng);
  p.lstm_fwd = init_lstm_direction(cfg.d_i, cfg.d_o, rng);
  p.lstm_bwd = init_lstm_direction(cfg.d_i, cfg.d_o, rng);
  p.attention = init_attention(*attention_of(cfg.variant), cfg.d_o, rng);
  // w0 maps d_o -> d_h, so its fan-in is d_o.
  p.w0 = uniform_matrix(cfg.d_h, cfg.d_o, fan(cfg.d_o), rng);
  p.w1 = uniform_matrix(cfg.d_h, num_classes, fan(cfg.d_h), rng);
  return p;
}

LabelMatrix make_labels(const ContentCorpus& corpus, std::span<const std::size_t> labelled) {
  LabelMatrix lm;
  lm.y = DenseMatrix(corpus.num_nodes(), corpus.num_classes);
  for (std::size_t i = 0; i < corpus.num_nodes(); ++i) {
    if (corpus.labels[i] >= corpus.num_classes) {
      throw DataError("label of node " + std::to_string(i) + " outside class range");
    }
    lm.y(i, corpus.labels[i]) = 1.0;
  }
  for (std::size_t d : labelled) {
    if (d >= corpus.num_nodes()) throw DataError("labelled index outside node range");
  }
  lm.mask.assign(labelled.begin(), labelled.end());
  return lm;
}

DenseMatrix bag_of_words(const ContentCorpus& corpus, std::size_t vocab_size) {
  DenseMatrix bow(corpus.num_nodes(), vocab_size);
  for (std::size_t i = 0; i < corpus.num_nodes(); ++i)
    for (std::size_t w : corpus.contents[i]) {
      if (w >= vocab_size) throw DataError("token id outside vocabulary");
      bow(i, w) = 1.0;
    }
  return bow;
}

ModelInputs ModelInputs::build(const Graph& g, const ContentCorpus& corpus,
                               std::size_t vocab_size, ModelVariant variant) {
  if (g.num_nodes() != corpus.num_nodes()) {
    throw DataError("graph has " + std::to_string(g.num_nodes()) + " nodes but corpus has " +
                    std::to_string(corpus.num_nodes()));
  }
  ModelInputs in;
  in.graph = &g;
  in.corpus = &corpus;
  in.a_norm = normalized_adjacency(g);
  in.closed_adjacency = DenseMatrix::identity(g.num_nodes());
  for (auto [a, b] : g.edges()) in.closed_adjacency(a, b) = in.closed_adjacency(b, a) = 1.0;
  in.neighborhoods.reserve(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) in.neighborhoods.push_back(neighborhood(g, i));
  if (variant == ModelVariant::kBaselineGcn) {
    in.propagated_bow = matmul(in.a_norm, bag_of_words(corpus, vocab_size));
  }
  return in;
}

ForwardOptions ForwardOptions::evaluation(const ExperimentConfig& cfg) {
  ForwardOptions o;
  o.layer1_normalize = cfg.layer1_normalize;
  return o;
}

ForwardOptions ForwardOptions::training_mode(const ExperimentConfig& cfg, Rng& rng) {
  ForwardOptions o;
  o.training = true;
  o.dropout_lstm = cfg.dropout_lstm;
  o.dropout_gcn = cfg.dropout_gcn;
  o.layer1_normalize = cfg.layer1_normalize;
  o.rng = &rng;
  return o;
}

BoundParams bind(Tape& t, ModelParams& params) {
  BoundParams bp;
  if (params.variant == ModelVariant::kBaselineGcn) {
    bp.baseline_w0 = t.parameter(params.baseline_w0);
    bp.baseline_w1 = t.parameter(params.baseline_w1);
    return bp;
  }
  bp.embeddings = t.parameter(params.embeddings);
  bp.lstm_fwd = bind(t, params.lstm_fwd);
  bp.lstm_bwd = bind(t, params.lstm_bwd);
  if (params.attention.variant == AttentionVariant::kSelf) {
    bp.w_self = t.parameter(params.attention.w_self);
  }
  if (params.attention.variant == AttentionVariant::kContext) {
    bp.w_context = t.parameter(params.attention.w_context);
  }
  bp.w0 = t.parameter(params.w0);
  bp.w1 = t.parameter(params.w1);
  return bp;
}

namespace {

Rng& dropout_rng(const ForwardOptions& opts) {
  if (opts.rng == nullptr) throw ConfigError("training-mode dropout needs an rng");
  return *opts.rng;
}

Var apply_dropout(Tape& t, Var x, double p, const ForwardOptions& opts) {
  if (!opts.training || p == 0.0) return x;
  return dropout(t, x, p, dropout_rng(opts), true);
}

}  // namespace

std::vector<std::optional<Var>> encode_nodes(Tape& t, const BoundParams& bp,
                                             const ContentCorpus& corpus,
                                             std::span<const std::size_t> nodes,
                                             const ForwardOptions& opts) {
  std::vector<std::optional<Var>> encoded(corpus.num_nodes());
  for (std::size_t m : nodes) {
    if (encoded.at(m)) continue;
    const auto& tokens = corpus.contents[m];
    if (tokens.empty()) throw DataError("node " + std::to_string(m) + " has no tokens");
    Var seq = gather_rows(t, bp.embeddings, tokens);
    Var h = bilstm_encode(t, bp.lstm_fwd, bp.lstm_bwd, seq);
    encoded[m] = apply_dropout(t, h, opts.dropout_lstm, opts);
  }
  return encoded;
}

NodeInputFeatures node_input_features(Tape& t, const BoundParams& bp, const ModelInputs& in,
                                      AttentionVariant variant, const ForwardOptions& opts,
                                      bool keep_alphas) {
  const std::size_t n = in.corpus->num_nodes();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const auto H = encode_nodes(t, bp, *in.corpus, all, opts);

  NodeInputFeatures out;
  if (keep_alphas) out.alphas.resize(n);

  if (variant != AttentionVariant::kContext) {
    std::vector<Var> alpha(n);
    std::vector<Var> rows(n);
    for (std::size_t m = 0; m < n; ++m) {
      if (variant == AttentionVariant::kSelf) {
        alpha[m] = attention_self(t, *H[m], *bp.w_self);
      } else {
        alpha[m] = uniform_attention(t, t.value(*H[m]).rows());
      }
      rows[m] = aggregate(t, *H[m], alpha[m]);
    }
    out.shared = stack_rows(t, rows);
    if (keep_alphas) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m : in.neighborhoods[i].members) out.alphas[i].push_back(alpha[m]);
    }
    return out;
  }

  out.per_center.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Var projection = context_projection(t, context_vector(t, *H[i]), *bp.w_context);
    std::vector<Var> rows;
    rows.reserve(in.neighborhoods[i].members.size());
    for (std::size_t m : in.neighborhoods[i].members) {
      Var alpha = attention_from_projection(t, *H[m], projection);
      rows.push_back(aggregate(t, *H[m], alpha));
      if (keep_alphas) out.alphas[i].push_back(alpha);
    }
    out.per_center.push_back(stack_rows(t, rows));
  }
  return out;
}

Var layer1(Tape& t, const ModelInputs& in, const NodeInputFeatures& features, Var w0,
           bool normalize) {
  const std::size_t n = in.corpus->num_nodes();
  Var summed;
  if (features.shared) {
    summed = matmul(t, t.constant_view(normalize ? in.a_norm : in.closed_adjacency),
                    *features.shared);
  } else {
    if (features.per_center.size() != n) throw ShapeError("layer1: missing per-center features");
    std::vector<Var> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& members = in.neighborhoods[i].members;
      DenseMatrix weights(1, members.size(), 1.0);
      if (normalize) {
        for (std::size_t k = 0; k < members.size(); ++k) weights(0, k) = in.a_norm(i, members[k]);
      }
      rows.push_back(matmul(t, t.constant(std::move(weights)), features.per_center[i]));
    }
    summed = stack_rows(t, rows);
  }
  return matmul(t, summed, transpose(t, w0));
}

Var layer2(Tape& t, const DenseMatrix& a_norm, Var x1, Var w1, const ForwardOptions& opts) {
  Var hidden = apply_dropout(t, activation(t, Activation::kRelu, x1), opts.dropout_gcn, opts);
  return matmul(t, matmul(t, t.constant_view(a_norm), hidden), w1);
}

Var classify(Tape& t, Var logits) { return rowwise_softmax(t, logits); }

Var loss(Tape& t, Var probs, const LabelMatrix& labels, const BoundParams& bp,
         ModelVariant variant, double lambda1, double lambda2) {
  if (lambda1 < 0.0 || lambda2 < 0.0) throw ConfigError("loss: negative regularization weight");
  Var total = masked_cross_entropy(t, probs, labels.y, labels.mask);
  auto add_term = [&](Var term, double weight) {
    if (weight != 0.0) total = add(t, total, scale(t, term, weight));
  };
  if (variant == ModelVariant::kBaselineGcn) {
    add_term(add(t, sum_squares(t, bp.baseline_w0), sum_squares(t, bp.baseline_w1)), lambda2);
    return total;
  }
  if (lambda1 != 0.0) {
    std::vector<Var> gates;
    for (const LstmVars* dir : {&bp.lstm_fwd, &bp.lstm_bwd}) {
      for (Var w : {dir->w_forget, dir->w_input, dir->w_cell, dir->w_output}) {
        gates.push_back(sum_squares(t, w));
      }
    }
    Var feature_reg = gates.front();
    for (std::size_t k = 1; k < gates.size(); ++k) feature_reg = add(t, feature_reg, gates[k]);
    add_term(feature_reg, lambda1);
  }
  if (lambda2 != 0.0) add_term(add(t, sum_squares(t, bp.w0), sum_squares(t, bp.w1)), lambda2);
  return total;
}

Var baseline_gcn_forward(Tape& t, const DenseMatrix& a_norm, const DenseMatrix& propagated_bow,
                         Var w0, Var w1, const ForwardOptions& opts) {
  Var x1 = matmul(t, t.constant_view(propagated_bow), w0);
  return classify(t, layer2(t, a_norm, x1, w1, opts));
}

Var forward(Tape& t, const BoundParams& bp, const ModelInputs& in, ModelVariant variant,
            const ForwardOptions& opts) {
  if (variant == ModelVariant::kBaselineGcn) {
    return baseline_gcn_forward(t, in.a_norm, in.propagated_bow, bp.baseline_w0, bp.baseline_w1,
                                opts);
  }
  NodeInputFeatures features = node_input_features(t, bp, in, *attention_of(variant), opts);
  Var x1 = layer1(t, in, features, bp.w0, opts.layer1_normalize);
  return classify(t, layer2(t, in.a_norm, x1, bp.w1, opts));
}

Var objective(Tape& t, ModelParams& params, const ModelInputs& in, const LabelMatrix& labels,
              const ExperimentConfig& cfg, const ForwardOptions& opts) {
  const BoundParams bp = bind(t, params);
  Var z = forward(t, bp, in, params.variant, opts);
  return loss(t, z, labels, bp, params.variant, cfg.lambda1, cfg.lambda2);
}

}  // namespace fagcn
