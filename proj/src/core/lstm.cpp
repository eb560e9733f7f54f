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

#include "lstm.hpp"

#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace fagcn {

std::vector<NamedParam> LstmDirectionParams::named(const std::string& prefix) {
  return {{prefix + ".w_forget", &w_forget}, {prefix + ".w_input", &w_input},
          {prefix + ".w_cell", &w_cell},     {prefix + ".w_output", &w_output},
          {prefix + ".b_forget", &b_forget}, {prefix + ".b_input", &b_input},
          {prefix + ".b_cell", &b_cell},     {prefix + ".b_output", &b_output}};
}

LstmDirectionParams zero_lstm_direction(std::size_t d_in, std::size_t d_out) {
  LstmDirectionParams p;
  for (DenseMatrix* w : {&p.w_forget, &p.w_input, &p.w_cell, &p.w_output})
    *w = DenseMatrix(d_in + d_out, d_out);
  for (DenseMatrix* b : {&p.b_forget, &p.b_input, &p.b_cell, &p.b_output})
    *b = DenseMatrix(1, d_out);
  return p;
}

LstmDirectionParams init_lstm_direction(std::size_t d_in, std::size_t d_out, Rng& rng) {
  LstmDirectionParams p = zero_lstm_direction(d_in, d_out);
  const double r = 1.0 / std::sqrt(static_cast<double>(d_out));
  for (NamedParam& np : p.named(""))
    for (double& x : np.matrix->values()) x = rng.uniform(-r, r);
  return p;
}

LstmVars bind(Tape& t, LstmDirectionParams& p) {
  LstmVars v;
  v.w_forget = t.parameter(p.w_forget);
  v.w_input = t.parameter(p.w_input);
  v.w_cell = t.parameter(p.w_cell);
  v.w_output = t.parameter(p.w_output);
  v.b_forget = t.parameter(p.b_forget);
  v.b_input = t.parameter(p.b_input);
  v.b_cell = t.parameter(p.b_cell);
  v.b_output = t.parameter(p.b_output);
  v.input_dim = p.input_dim();
  v.output_dim = p.output_dim();
  return v;
}

Var lstm_forward(Tape& t, const LstmVars& p, Var seq) {
  const std::size_t steps = t.value(seq).rows();
  if (t.value(seq).cols() != p.input_dim) {
    throw ShapeError("lstm_forward: step inputs have dimension " +
                     std::to_string(t.value(seq).cols()) + ", expected " +
                     std::to_string(p.input_dim));
  }
  if (steps == 0) throw ShapeError("lstm_forward: empty sequence");

  Var h = t.constant(DenseMatrix(1, p.output_dim));
  Var c = t.constant(DenseMatrix(1, p.output_dim));
  std::vector<Var> outputs;
  outputs.reserve(steps);
  auto gate = [&](Var x, Var w, Var b, Activation act) {
    return activation(t, act, add_row(t, matmul(t, x, w), b));
  };
  for (std::size_t s = 0; s < steps; ++s) {
    Var x = concat_cols(t, row(t, seq, s), h);
    Var f = gate(x, p.w_forget, p.b_forget, Activation::kSigmoid);
    Var i = gate(x, p.w_input, p.b_input, Activation::kSigmoid);
    Var g = gate(x, p.w_cell, p.b_cell, Activation::kTanh);
    Var o = gate(x, p.w_output, p.b_output, Activation::kSigmoid);
    c = add(t, hadamard(t, f, c), hadamard(t, i, g));
    h = hadamard(t, o, activation(t, Activation::kTanh, c));
    outputs.push_back(h);
  }
  return stack_rows(t, outputs);
}

Var bilstm_encode(Tape& t, const LstmVars& fwd, const LstmVars& bwd, Var seq) {
  if (fwd.input_dim != bwd.input_dim || fwd.output_dim != bwd.output_dim) {
    throw ShapeError("bilstm_encode: forward and backward directions disagree on dimensions");
  }
  const std::size_t steps = t.value(seq).rows();
  if (steps == 0) throw ShapeError("bilstm_encode: empty sequence");
  std::vector<std::size_t> reversed(steps);
  std::iota(reversed.rbegin(), reversed.rend(), std::size_t{0});

  Var forward = lstm_forward(t, fwd, seq);
  Var backward_rev = lstm_forward(t, bwd, gather_rows(t, seq, reversed));
  // Row s of backward_rev belongs to position steps-1-s.
  Var backward = gather_rows(t, backward_rev, reversed);
  return add(t, forward, backward);
}

DenseMatrix lstm_forward(const LstmDirectionParams& p, const DenseMatrix& seq) {
  Tape t;
  LstmDirectionParams copy = p;
  const LstmVars v = bind(t, copy);
  return t.value(lstm_forward(t, v, t.constant(seq.detached()))).detached();
}

DenseMatrix bilstm_encode(const LstmDirectionParams& fwd, const LstmDirectionParams& bwd,
                          const DenseMatrix& seq) {
  Tape t;
  LstmDirectionParams f = fwd, b = bwd;
  const LstmVars fv = bind(t, f);
  const LstmVars bv = bind(t, b);
  return t.value(bilstm_encode(t, fv, bv, t.constant(seq.detached()))).detached();
}

}  // namespace fagcn
