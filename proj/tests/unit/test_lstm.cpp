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

#include "errors.hpp"
#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "lstm.hpp"
#include "reference_model.hpp"

using namespace fagcn;
using fagcn::testing::random_matrix;

namespace {

fagcn::testing::Rows to_rows(const DenseMatrix& m) {
  fagcn::testing::Rows out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
  return out;
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST(Lstm, ZeroParametersGiveZeroOutputs) {
  Rng rng(1);
  const DenseMatrix h = lstm_forward(zero_lstm_direction(3, 5), random_matrix(4, 3, rng));
  ASSERT_EQ(h.rows(), 4u);
  ASSERT_EQ(h.cols(), 5u);
  for (double v : h.values()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, ScalarHandTrace) {
  LstmDirectionParams p = zero_lstm_direction(1, 1);
  p.w_forget = DenseMatrix::from_rows({{0.3}, {-0.2}});
  p.w_input = DenseMatrix::from_rows({{0.5}, {0.1}});
  p.w_cell = DenseMatrix::from_rows({{-0.7}, {0.4}});
  p.w_output = DenseMatrix::from_rows({{0.9}, {0.6}});
  p.b_forget(0, 0) = 0.1;
  p.b_input(0, 0) = -0.3;
  p.b_cell(0, 0) = 0.2;
  p.b_output(0, 0) = 0.05;
  const double x = 1.5;
  const double i = sig(0.5 * x - 0.3);
  const double g = std::tanh(-0.7 * x + 0.2);
  const double o = sig(0.9 * x + 0.05);
  const double c = i * g;  // c_0 = 0 removes the forget term
  const double h1 = o * std::tanh(c);
  EXPECT_NEAR(lstm_forward(p, DenseMatrix::from_rows({{x}}))(0, 0), h1, 1e-12);

  // Second step exercises the recurrent column and the forget gate.
  const double x2 = -0.8;
  const double f2 = sig(0.3 * x2 - 0.2 * h1 + 0.1);
  const double i2 = sig(0.5 * x2 + 0.1 * h1 - 0.3);
  const double g2 = std::tanh(-0.7 * x2 + 0.4 * h1 + 0.2);
  const double o2 = sig(0.9 * x2 + 0.6 * h1 + 0.05);
  const double h2 = o2 * std::tanh(f2 * c + i2 * g2);
  EXPECT_NEAR(lstm_forward(p, DenseMatrix::from_rows({{x}, {x2}}))(1, 0), h2, 1e-12);
}

TEST(Lstm, MatchesDuplicateRecurrence) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const LstmDirectionParams p = init_lstm_direction(3, 4, rng);
    const DenseMatrix seq = random_matrix(5, 3, rng);
    const DenseMatrix got = lstm_forward(p, seq);
    const auto want = fagcn::testing::ref_lstm(p, to_rows(seq));
    for (std::size_t t = 0; t < 5; ++t) {
      for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got(t, k), want[t][k], 1e-12);
    }
  }
}

TEST(Lstm, InitRange) {
  Rng rng(3);
  const LstmDirectionParams p = init_lstm_direction(6, 16, rng);
  EXPECT_EQ(p.w_forget.rows(), 22u);
  EXPECT_EQ(p.w_forget.cols(), 16u);
  EXPECT_EQ(p.b_output.rows(), 1u);
  EXPECT_EQ(p.input_dim(), 6u);
  for (const DenseMatrix* m : {&p.w_forget, &p.w_input, &p.w_cell, &p.w_output, &p.b_forget}) {
    for (double v : m->values()) EXPECT_LE(std::abs(v), 0.25);
  }
}

TEST(Lstm, RejectsWrongInputWidthAndEmptySequences) {
  const LstmDirectionParams p = zero_lstm_direction(3, 2);
  EXPECT_THROW(lstm_forward(p, DenseMatrix(2, 4)), ShapeError);
  EXPECT_THROW(lstm_forward(p, DenseMatrix(0, 3)), ShapeError);
  EXPECT_THROW(bilstm_encode(p, zero_lstm_direction(3, 3), DenseMatrix(2, 3)), ShapeError);
}

TEST(BiLstm, ZeroBackwardEqualsForward) {
  Rng rng(4);
  const LstmDirectionParams fwd = init_lstm_direction(3, 4, rng);
  const DenseMatrix seq = random_matrix(6, 3, rng);
  EXPECT_EQ(bilstm_encode(fwd, zero_lstm_direction(3, 4), seq), lstm_forward(fwd, seq));
}

TEST(BiLstm, SingleTokenSumsBothDirections) {
  Rng rng(5);
  const LstmDirectionParams fwd = init_lstm_direction(3, 4, rng);
  const LstmDirectionParams bwd = init_lstm_direction(3, 4, rng);
  const DenseMatrix seq = random_matrix(1, 3, rng);
  const DenseMatrix h = bilstm_encode(fwd, bwd, seq);
  const DenseMatrix a = lstm_forward(fwd, seq), b = lstm_forward(bwd, seq);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(h(0, k), a(0, k) + b(0, k), 1e-15);
}

TEST(BiLstm, PalindromeWithSharedParametersIsReversalSymmetric) {
  Rng rng(6);
  const LstmDirectionParams p = init_lstm_direction(3, 4, rng);
  DenseMatrix seq = random_matrix(3, 3, rng);
  for (std::size_t k = 0; k < 3; ++k) seq(2, k) = seq(0, k);
  const DenseMatrix h = bilstm_encode(p, p, seq);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(h(0, k), h(2, k), 1e-12);
}

TEST(BiLstm, OutputsBoundedPerDirection) {
  Rng rng(7);
  LstmDirectionParams p = init_lstm_direction(3, 4, rng);
  for (double& v : p.w_cell.values()) v *= 30.0;
  const DenseMatrix h = lstm_forward(p, random_matrix(8, 3, rng, 5.0));
  for (double v : h.values()) EXPECT_LT(std::abs(v), 1.0);
}

TEST(BiLstm, DirectionsAreCausal) {
  Rng rng(8);
  const LstmDirectionParams fwd = init_lstm_direction(3, 4, rng);
  const LstmDirectionParams bwd = init_lstm_direction(3, 4, rng);
  const DenseMatrix seq = random_matrix(5, 3, rng);
  const std::size_t k = 2;
  DenseMatrix changed = seq.detached();
  changed(k, 0) += 0.5;
  const DenseMatrix f0 = lstm_forward(fwd, seq), f1 = lstm_forward(fwd, changed);
  // The backward pass sees reversed rows, so reversed position 4 - j is original position j.
  DenseMatrix rev(5, 3), rev_changed(5, 3);
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t c = 0; c < 3; ++c) {
      rev(t, c) = seq(4 - t, c);
      rev_changed(t, c) = changed(4 - t, c);
    }
  }
  const DenseMatrix b0 = lstm_forward(bwd, rev), b1 = lstm_forward(bwd, rev_changed);
  for (std::size_t j = 0; j < 5; ++j) {
    bool f_same = true, b_same = true;
    for (std::size_t c = 0; c < 4; ++c) {
      f_same = f_same && f0(j, c) == f1(j, c);
      b_same = b_same && b0(4 - j, c) == b1(4 - j, c);
    }
    EXPECT_EQ(f_same, j < k) << "forward position " << j;
    EXPECT_EQ(b_same, j > k) << "backward position " << j;
  }
}

TEST(BiLstm, GradientsMatchFiniteDifferences) {
  Rng rng(9);
  LstmDirectionParams fwd = init_lstm_direction(4, 4, rng);
  LstmDirectionParams bwd = init_lstm_direction(4, 4, rng);
  DenseMatrix seq = random_matrix(3, 4, rng);
  const DenseMatrix target = random_matrix(3, 4, rng);
  std::vector<NamedParam> params = fwd.named("fwd");
  for (NamedParam& p : bwd.named("bwd")) params.push_back(p);
  params.push_back({"seq", &seq});
  auto loss = [&](Tape& t) {
    Var h = bilstm_encode(t, bind(t, fwd), bind(t, bwd), t.parameter(seq));
    return sum_squares(t, add(t, h, t.constant(target)));
  };
  const GradCheckReport rep = grad_check(loss, params, 1e-5);
  EXPECT_LT(rep.max_relative_error, 1e-4);
  EXPECT_EQ(rep.groups.size(), params.size());
}
