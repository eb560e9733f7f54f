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
#include <optional>
#include <span>
#include <vector>

#include "attention.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "gradcheck.hpp"
#include "graph.hpp"
#include "lstm.hpp"
#include "tensor.hpp"

namespace fagcn {

/// Every trainable matrix. Which ones are populated depends on the variant:
/// feature-attention models use the embedding table, both LSTM directions,
/// their attention parameters and w0/w1; the plain GCN uses baseline_w0/w1.
struct ModelParams {
  ModelVariant variant = ModelVariant::kContext;
  DenseMatrix embeddings;  // |vocab| x d_i
  LstmDirectionParams lstm_fwd;
  LstmDirectionParams lstm_bwd;
  AttentionParams attention;
  DenseMatrix w0;           // d_h x d_o
  DenseMatrix w1;           // d_h x l
  DenseMatrix baseline_w0;  // |vocab| x d_h
  DenseMatrix baseline_w1;  // d_h x l

  /// Populated matrices in a fixed order with stable names.
  std::vector<NamedParam> named();
  void zero_grad();
};

ModelParams init_params(const ExperimentConfig& cfg, std::size_t vocab_size,
                        std::size_t num_classes, Rng& rng);

/// One-hot labels plus the labelled rows that enter the loss.
struct LabelMatrix {
  DenseMatrix y;                  // n x l
  std::vector<std::size_t> mask;  // labelled node indices
};

LabelMatrix make_labels(const ContentCorpus& corpus, std::span<const std::size_t> labelled);

/// Graph-derived matrices reused by every forward pass.
struct ModelInputs {
  const Graph* graph = nullptr;
  const ContentCorpus* corpus = nullptr;
  std::vector<Neighborhood> neighborhoods;
  DenseMatrix a_norm;            // normalized adjacency with self-loops
  DenseMatrix closed_adjacency;  // I + A
  DenseMatrix propagated_bow;    // a_norm * bag-of-words, baseline only

  static ModelInputs build(const Graph& g, const ContentCorpus& corpus, std::size_t vocab_size,
                           ModelVariant variant);
};

/// 0/1 bag-of-words matrix, n x |vocab|.
DenseMatrix bag_of_words(const ContentCorpus& corpus, std::size_t vocab_size);

struct ForwardOptions {
  bool training = false;
  double dropout_lstm = 0.0;
  double dropout_gcn = 0.0;
  bool layer1_normalize = false;
  Rng* rng = nullptr;  // required when training with non-zero dropout

  static ForwardOptions evaluation(const ExperimentConfig& cfg);
  static ForwardOptions training_mode(const ExperimentConfig& cfg, Rng& rng);
};

/// Tape handles for all populated parameters.
struct BoundParams {
  Var embeddings;
  LstmVars lstm_fwd, lstm_bwd;
  std::optional<Var> w_self, w_context;
  Var w0, w1;
  Var baseline_w0, baseline_w1;
};

BoundParams bind(Tape& t, ModelParams& params);

/// Aggregated node features entering the first convolution.
///
/// Without context attention each node has one feature vector (`shared`,
/// n x d_o). With context attention a neighbour's vector depends on the
/// center, so `per_center[i]` holds one row per member of N_i.
struct NodeInputFeatures {
  std::optional<Var> shared;
  std::vector<Var> per_center;
  /// alphas[i][k]: 1 x |cnt_m| weights of member k of N_i (kept when requested).
  std::vector<std::vector<Var>> alphas;
};

/// H_m for every node in `nodes` (others stay unset). LSTM dropout is
/// applied to the rows of each H_m in training mode.
std::vector<std::optional<Var>> encode_nodes(Tape& t, const BoundParams& bp,
                                             const ContentCorpus& corpus,
                                             std::span<const std::size_t> nodes,
                                             const ForwardOptions& opts);

NodeInputFeatures node_input_features(Tape& t, const BoundParams& bp, const ModelInputs& in,
                                      AttentionVariant variant, const ForwardOptions& opts,
                                      bool keep_alphas = false);

/// X1_i = sum over m in N_i of W0 X_m (or the a_norm-weighted sum when
/// `normalize`). Result is n x d_h.
Var layer1(Tape& t, const ModelInputs& in, const NodeInputFeatures& features, Var w0,
           bool normalize);

/// O = a_norm * dropout(ReLU(X1)) * W1.
Var layer2(Tape& t, const DenseMatrix& a_norm, Var x1, Var w1, const ForwardOptions& opts);

Var classify(Tape& t, Var logits);

/// Cross-entropy over labelled rows plus lambda1 * R_f + lambda2 * R_n.
Var loss(Tape& t, Var probs, const LabelMatrix& labels, const BoundParams& bp,
         ModelVariant variant, double lambda1, double lambda2);

/// softmax(a_norm * dropout(ReLU(a_norm * X_bow * W0)) * W1), with
/// a_norm * X_bow supplied precomputed.
Var baseline_gcn_forward(Tape& t, const DenseMatrix& a_norm, const DenseMatrix& propagated_bow,
                         Var w0, Var w1, const ForwardOptions& opts);

/// Class probabilities Z (n x l) for any variant.
Var forward(Tape& t, const BoundParams& bp, const ModelInputs& in, ModelVariant variant,
            const ForwardOptions& opts);

/// Full training objective for the labelled rows.
Var objective(Tape& t, ModelParams& params, const ModelInputs& in, const LabelMatrix& labels,
              const ExperimentConfig& cfg, const ForwardOptions& opts);

}  // namespace fagcn
