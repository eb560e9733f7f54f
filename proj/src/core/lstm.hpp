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
#include <vector>

#include "gradcheck.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace fagcn {

/// One direction of the LSTM. Gate weights act on the row vector
/// [x_t, h_{t-1}], so each is (d_in + d_out) x d_out; biases are 1 x d_out.
struct LstmDirectionParams {
  DenseMatrix w_forget, w_input, w_cell, w_output;
  DenseMatrix b_forget, b_input, b_cell, b_output;

  std::size_t input_dim() const { return w_forget.rows() - w_forget.cols(); }
  std::size_t output_dim() const { return w_forget.cols(); }

  /// Named views in a fixed order: the four gate weights, then the biases.
  std::vector<NamedParam> named(const std::string& prefix);
};

/// Every entry uniform in [-1/sqrt(d_out), 1/sqrt(d_out)].
LstmDirectionParams init_lstm_direction(std::size_t d_in, std::size_t d_out, Rng& rng);
LstmDirectionParams zero_lstm_direction(std::size_t d_in, std::size_t d_out);

/// Tape handles for one direction's parameters.
struct LstmVars {
  Var w_forget, w_input, w_cell, w_output;
  Var b_forget, b_input, b_cell, b_output;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
};

LstmVars bind(Tape& t, LstmDirectionParams& p);

/// Runs the recurrence over the rows of `seq` (T x d_in) from zero states and
/// returns the T x d_out matrix of hidden outputs.
Var lstm_forward(Tape& t, const LstmVars& p, Var seq);

/// Elementwise sum of the forward pass and the backward pass over the
/// reversed sequence, aligned per position. Output is T x d_out.
Var bilstm_encode(Tape& t, const LstmVars& fwd, const LstmVars& bwd, Var seq);

// Untaped conveniences.
DenseMatrix lstm_forward(const LstmDirectionParams& p, const DenseMatrix& seq);
DenseMatrix bilstm_encode(const LstmDirectionParams& fwd, const LstmDirectionParams& bwd,
                          const DenseMatrix& seq);

}  // namespace fagcn
