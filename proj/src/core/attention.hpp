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
#include <string>
#include <string_view>

#include "rng.hpp"
#include "tensor.hpp"

namespace fagcn {

/// How a node's token vectors are weighted before summation.
enum class AttentionVariant {
  kNone,     // uniform weights (mean)
  kSelf,     // softmax(tanh(H) w_a^T)
  kContext,  // softmax(H W_b h_context^T), h_context from the center node
};

std::string_view to_string(AttentionVariant v);
std::optional<AttentionVariant> parse_attention_variant(std::string_view name);

/// Only the matrix of the declared variant is non-empty.
struct AttentionParams {
  AttentionVariant variant = AttentionVariant::kNone;
  DenseMatrix w_self;     // 1 x d_o
  DenseMatrix w_context;  // d_o x d_o
};

/// w_self uniform in [-1/sqrt(d_o), 1/sqrt(d_o)], w_context uniform in [-1/d_o, 1/d_o].
AttentionParams init_attention(AttentionVariant variant, std::size_t d_o, Rng& rng);

// Weights come back as a 1 x T row on the probability simplex.

Var attention_self(Tape& t, Var features, Var w_self);
/// 1 x d_o column sum of a node's token vectors.
Var context_vector(Tape& t, Var features);
/// W_b h_context^T, a d_o x 1 column shared by every neighbour of one center.
Var context_projection(Tape& t, Var context, Var w_context);
Var attention_from_projection(Tape& t, Var features, Var projection);
Var attention_context(Tape& t, Var features, Var context, Var w_context);
Var uniform_attention(Tape& t, std::size_t length);
/// alpha * features; a missing alpha means uniform weights.
Var aggregate(Tape& t, Var features, std::optional<Var> alpha);

// Untaped conveniences.
DenseMatrix attention_self(const DenseMatrix& features, const DenseMatrix& w_self);
DenseMatrix context_vector(const DenseMatrix& features);
DenseMatrix attention_context(const DenseMatrix& features, const DenseMatrix& context,
                              const DenseMatrix& w_context);
DenseMatrix aggregate(const DenseMatrix& features, const DenseMatrix* alpha);

}  // namespace fagcn
