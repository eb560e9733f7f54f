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
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"

namespace fagcn {

/// Row-major matrix of doubles with an optional gradient slot of equal shape.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  /// Builds a matrix from nested rows; all rows must have equal length.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  bool has_grad() const { return !grad_.empty() && grad_.size() == values_.size(); }
  /// Gradient slot, allocated (zeroed) on first access.
  std::span<double> grad();
  std::span<const double> grad() const { return grad_; }
  void zero_grad();
  void drop_grad() { grad_.clear(); }
  /// Copy of the values without the gradient slot.
  DenseMatrix detached() const { return DenseMatrix(rows_, cols_, values_); }

  /// "rows x cols", used in error messages.
  std::string shape_string() const;
  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<double> grad_;
};

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
};

enum class Activation { kSigmoid, kTanh, kRelu };

/// Reverse-mode recording of matrix operations.
///
/// Parameters are bound by reference: their values are read in place and
/// backward() accumulates (+=) directly into their grad slots. Zeroing those
/// slots between steps is the caller's job.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(DenseMatrix value);
  /// Constant read in place; `value` must outlive the tape.
  Var constant_view(const DenseMatrix& value);
  Var parameter(DenseMatrix& param);

  const DenseMatrix& value(Var v) const;
  /// Gradient accumulated for v, empty if nothing reached it.
  std::span<const double> grad(Var v) const;

  /// Seeds d(loss)/d(loss) = 1 and replays backward rules in reverse order.
  void backward(Var loss);
  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

  // Used by operation implementations.
  Var record(DenseMatrix value, BackwardFn backward);
  std::span<double> grad_mut(Var v);
  /// False for constants, whose gradients nobody reads.
  bool needs_grad(Var v) const { return node(v).needs_grad; }
  std::span<const double> node_grad(std::size_t id) const;

 private:
  struct Node {
    DenseMatrix value;
    DenseMatrix* bound = nullptr;
    const DenseMatrix* view = nullptr;
    bool needs_grad = true;
    std::vector<double> grad;
    BackwardFn backward;
  };
  const Node& node(Var v) const;
  Node& node(Var v);

  std::vector<Node> nodes_;
};

// ---- recorded operations -------------------------------------------------

Var matmul(Tape& t, Var a, Var b);
Var transpose(Tape& t, Var a);
Var add(Tape& t, Var a, Var b);
/// a (r x c) plus a 1 x c row broadcast to every row.
Var add_row(Tape& t, Var a, Var row);
Var hadamard(Tape& t, Var a, Var b);
Var scale(Tape& t, Var a, double factor);
Var activation(Tape& t, Activation kind, Var x);
Var rowwise_softmax(Tape& t, Var x);
/// Inverted dropout; identity when !training or p == 0.
Var dropout(Tape& t, Var x, double p, Rng& rng, bool training);
Var concat_cols(Tape& t, Var a, Var b);
Var gather_rows(Tape& t, Var table, std::span<const std::size_t> ids);
Var row(Tape& t, Var a, std::size_t r);
Var stack_rows(Tape& t, std::span<const Var> rows);
/// 1 x c column sums.
Var sum_rows(Tape& t, Var a);
/// 1 x 1 sum of squared entries.
Var sum_squares(Tape& t, Var a);
/// -sum over rows in `rows` of sum_f labels(d,f) * ln(max(probs(d,f), clamp)).
Var masked_cross_entropy(Tape& t, Var probs, const DenseMatrix& labels,
                         std::span<const std::size_t> rows, double clamp = 1e-12);

// ---- plain (untaped) conveniences ----------------------------------------

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix activation(Activation kind, const DenseMatrix& x);
DenseMatrix rowwise_softmax(const DenseMatrix& x);
DenseMatrix dropout(const DenseMatrix& x, double p, Rng& rng, bool training);

}  // namespace fagcn
