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

#include "attention.hpp"

#include <cmath>

#include "errors.hpp"

namespace fagcn {

std::string_view to_string(AttentionVariant v) {
  switch (v) {
    case AttentionVariant::kNone:
      return "none";
    case AttentionVariant::kSelf:
      return "self";
    case AttentionVariant::kContext:
      return "context";
  }
  return "none";
}

std::optional<AttentionVariant> parse_attention_variant(std::string_view name) {
  if (name == "none") return AttentionVariant::kNone;
  if (name == "self") return AttentionVariant::kSelf;
  if (name == "context") return AttentionVariant::kContext;
  return std::nullopt;
}

AttentionParams init_attention(AttentionVariant variant, std::size_t d_o, Rng& rng) {
  AttentionParams p;
  p.variant = variant;
  const double n = static_cast<double>(d_o);
  if (variant == AttentionVariant::kSelf) {
    p.w_self = DenseMatrix(1, d_o);
    const double r = 1.0 / std::sqrt(n);
    for (double& x : p.w_self.values()) x = rng.uniform(-r, r);
  } else if (variant == AttentionVariant::kContext) {
    p.w_context = DenseMatrix(d_o, d_o);
    for (double& x : p.w_context.values()) x = rng.uniform(-1.0 / n, 1.0 / n);
  }
  return p;
}

Var attention_self(Tape& t, Var features, Var w_self) {
  Var scores = matmul(t, activation(t, Activation::kTanh, features), transpose(t, w_self));
  return rowwise_softmax(t, transpose(t, scores));
}

Var context_vector(Tape& t, Var features) { return sum_rows(t, features); }

Var context_projection(Tape& t, Var context, Var w_context) {
  return matmul(t, w_context, transpose(t, context));
}

Var attention_from_projection(Tape& t, Var features, Var projection) {
  return rowwise_softmax(t, transpose(t, matmul(t, features, projection)));
}

Var attention_context(Tape& t, Var features, Var context, Var w_context) {
  return attention_from_projection(t, features, context_projection(t, context, w_context));
}

Var uniform_attention(Tape& t, std::size_t length) {
  return t.constant(DenseMatrix(1, length, 1.0 / static_cast<double>(length)));
}

Var aggregate(Tape& t, Var features, std::optional<Var> alpha) {
  const std::size_t rows = t.value(features).rows();
  Var weights = alpha ? *alpha : uniform_attention(t, rows);
  const DenseMatrix& w = t.value(weights);
  if (w.rows() != 1 || w.cols() != rows) {
    throw ShapeError("aggregate: weights " + w.shape_string() + " do not match " +
                     std::to_string(rows) + " feature rows");
  }
  return matmul(t, weights, features);
}

DenseMatrix attention_self(const DenseMatrix& features, const DenseMatrix& w_self) {
  Tape t;
  return t.value(attention_self(t, t.constant(features.detached()), t.constant(w_self.detached())))
      .detached();
}

DenseMatrix context_vector(const DenseMatrix& features) {
  Tape t;
  return t.value(context_vector(t, t.constant(features.detached()))).detached();
}

DenseMatrix attention_context(const DenseMatrix& features, const DenseMatrix& context,
                              const DenseMatrix& w_context) {
  Tape t;
  return t
      .value(attention_context(t, t.constant(features.detached()), t.constant(context.detached()),
                               t.constant(w_context.detached())))
      .detached();
}

DenseMatrix aggregate(const DenseMatrix& features, const DenseMatrix* alpha) {
  Tape t;
  std::optional<Var> a;
  if (alpha != nullptr) a = t.constant(alpha->detached());
  return t.value(aggregate(t, t.constant(features.detached()), a)).detached();
}

}  // namespace fagcn
