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

#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "errors.hpp"

namespace fagcn {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ShapeError("matrix " + shape_string() + " given " + std::to_string(values_.size()) +
                     " values");
  }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> v;
  v.reserve(r * c);
  for (const auto& line : rows) {
    if (line.size() != c) throw ShapeError("ragged rows in matrix literal");
    v.insert(v.end(), line.begin(), line.end());
  }
  return DenseMatrix(r, c, std::move(v));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::span<double> DenseMatrix::grad() {
  if (grad_.size() != values_.size()) grad_.assign(values_.size(), 0.0);
  return grad_;
}

void DenseMatrix::zero_grad() { grad_.assign(values_.size(), 0.0); }

std::string DenseMatrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool DenseMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

// ---- Tape ---------------------------------------------------------------

Var Tape::constant(DenseMatrix value) {
  Var v = record(std::move(value), nullptr);
  nodes_[v.id].needs_grad = false;
  return v;
}

Var Tape::constant_view(const DenseMatrix& value) {
  Node n;
  n.view = &value;
  n.needs_grad = false;
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Var Tape::parameter(DenseMatrix& param) {
  Node n;
  n.bound = &param;
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Var Tape::record(DenseMatrix value, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id >= nodes_.size()) throw std::out_of_range("tape variable out of range");
  return nodes_[v.id];
}

Tape::Node& Tape::node(Var v) {
  if (v.id >= nodes_.size()) throw std::out_of_range("tape variable out of range");
  return nodes_[v.id];
}

const DenseMatrix& Tape::value(Var v) const {
  const Node& n = node(v);
  if (n.bound) return *n.bound;
  if (n.view) return *n.view;
  return n.value;
}

std::span<const double> Tape::grad(Var v) const {
  const Node& n = node(v);
  if (n.bound) return n.bound->grad();
  return n.grad;
}

std::span<const double> Tape::node_grad(std::size_t id) const { return nodes_[id].grad; }

std::span<double> Tape::grad_mut(Var v) {
  Node& n = node(v);
  if (n.bound) return n.bound->grad();
  const std::size_t size = n.view ? n.view->size() : n.value.size();
  if (n.grad.size() != size) n.grad.assign(size, 0.0);
  return n.grad;
}

void Tape::backward(Var loss) {
  const DenseMatrix& out = value(loss);
  if (out.size() != 1) throw ShapeError("backward expects a 1x1 loss, got " + out.shape_string());
  grad_mut(loss)[0] += 1.0;
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.backward || n.grad.empty()) continue;
    n.backward(*this, id);
  }
}

// ---- kernels --------------------------------------------------------------

namespace {

// c += a * b, skipping zero entries of a (sparse-friendly, order is fixed).
void gemm_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
              std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

// c += a * b^T  with a: m x k, b: n x k.
void gemm_nt_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
      c[i * n + j] += s;
    }
  }
}

// c += a^T * b  with a: k x m, b: k x n.
void gemm_tn_acc(const double* a, const double* b, double* c, std::size_t k, std::size_t m,
                 std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* ap = a + p * m;
    const double* bp = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = ap[i];
      if (api == 0.0) continue;
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
}

double apply(Activation kind, double x) {
  switch (kind) {
    case Activation::kSigmoid:
      return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
  }
  return x;
}

// Derivative expressed through the input x and output y.
double derivative(Activation kind, double x, double y) {
  switch (kind) {
    case Activation::kSigmoid:
      return y * (1.0 - y);
    case Activation::kTanh:
      return 1.0 - y * y;
    case Activation::kRelu:
      return x > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

void require_same_shape(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

void softmax_rows_inplace(DenseMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double peak = -INFINITY;
    for (std::size_t c = 0; c < m.cols(); ++c) peak = std::max(peak, m(r, c));
    double total = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      m(r, c) = std::exp(m(r, c) - peak);
      total += m(r, c);
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) /= total;
  }
}

void check_probability(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ConfigError("dropout probability must lie in [0, 1), got " + std::to_string(p));
  }
}

}  // namespace

// ---- recorded operations -------------------------------------------------

Var matmul(Tape& t, Var a, Var b) {
  const DenseMatrix& A = t.value(a);
  const DenseMatrix& B = t.value(b);
  if (A.cols() != B.rows()) {
    throw ShapeError("matmul: cannot multiply " + A.shape_string() + " by " + B.shape_string());
  }
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  DenseMatrix C(m, n);
  gemm_acc(A.values().data(), B.values().data(), C.values().data(), m, k, n);
  return t.record(std::move(C), [a, b, m, k, n](Tape& tape, std::size_t self) {
    std::span<const double> dc = tape.node_grad(self);
    const double* av = tape.value(a).values().data();
    const double* bv = tape.value(b).values().data();
    if (tape.needs_grad(a)) gemm_nt_acc(dc.data(), bv, tape.grad_mut(a).data(), m, n, k);
    if (tape.needs_grad(b)) gemm_tn_acc(av, dc.data(), tape.grad_mut(b).data(), m, k, n);
  });
}

Var transpose(Tape& t, Var a) {
  const DenseMatrix& A = t.value(a);
  const std::size_t r = A.rows(), c = A.cols();
  DenseMatrix out(c, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(j, i) = A(i, j);
  return t.record(std::move(out), [a, r, c](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    std::span<double> ga = tape.grad_mut(a);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += g[j * r + i];
  });
}

Var add(Tape& t, Var a, Var b) {
  const DenseMatrix& A = t.value(a);
  const DenseMatrix& B = t.value(b);
  require_same_shape("add", A, B);
  DenseMatrix out = A.detached();
  auto ov = out.values();
  auto bv = B.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += bv[i];
  return t.record(std::move(out), [a, b](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    for (Var v : {a, b}) {
      std::span<double> gv = tape.grad_mut(v);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
  });
}

Var add_row(Tape& t, Var a, Var row_var) {
  const DenseMatrix& A = t.value(a);
  const DenseMatrix& R = t.value(row_var);
  if (R.rows() != 1 || R.cols() != A.cols()) {
    throw ShapeError("add_row: cannot broadcast " + R.shape_string() + " onto " +
                     A.shape_string());
  }
  DenseMatrix out = A.detached();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += R(0, j);
  const std::size_t rows = A.rows(), cols = A.cols();
  return t.record(std::move(out), [a, row_var, rows, cols](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    std::span<double> ga = tape.grad_mut(a);
    std::span<double> gr = tape.grad_mut(row_var);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        ga[i * cols + j] += g[i * cols + j];
        gr[j] += g[i * cols + j];
      }
  });
}

Var hadamard(Tape& t, Var a, Var b) {
  const DenseMatrix& A = t.value(a);
  const DenseMatrix& B = t.value(b);
  require_same_shape("hadamard", A, B);
  DenseMatrix out = A.detached();
  auto ov = out.values();
  auto bv = B.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= bv[i];
  return t.record(std::move(out), [a, b](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    auto av = tape.value(a).values();
    auto bv = tape.value(b).values();
    {
      std::span<double> ga = tape.grad_mut(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    std::span<double> gb = tape.grad_mut(b);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
  });
}

Var scale(Tape& t, Var a, double factor) {
  DenseMatrix out = t.value(a).detached();
  for (double& x : out.values()) x *= factor;
  return t.record(std::move(out), [a, factor](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    std::span<double> ga = tape.grad_mut(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

Var activation(Tape& t, Activation kind, Var x) {
  DenseMatrix out = activation(kind, t.value(x));
  return t.record(std::move(out), [x, kind](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    auto xv = tape.value(x).values();
    auto yv = tape.value(Var{self}).values();
    std::span<double> gx = tape.grad_mut(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * derivative(kind, xv[i], yv[i]);
  });
}

Var rowwise_softmax(Tape& t, Var x) {
  DenseMatrix out = rowwise_softmax(t.value(x));
  return t.record(std::move(out), [x](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    const DenseMatrix& y = tape.value(Var{self});
    std::span<double> gx = tape.grad_mut(x);
    const std::size_t cols = y.cols();
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * y(r, c);
      for (std::size_t c = 0; c < cols; ++c) gx[r * cols + c] += y(r, c) * (g[r * cols + c] - dot);
    }
  });
}

Var dropout(Tape& t, Var x, double p, Rng& rng, bool training) {
  check_probability(p);
  if (!training || p == 0.0) return x;
  const DenseMatrix& X = t.value(x);
  const double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(X.size());
  for (double& m : mask) m = rng.uniform01() < p ? 0.0 : keep_scale;
  DenseMatrix out = X.detached();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] *= mask[i];
  return t.record(std::move(out), [x, mask = std::move(mask)](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    std::span<double> gx = tape.grad_mut(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * mask[i];
  });
}

Var concat_cols(Tape& t, Var a, Var b) {
  const DenseMatrix& A = t.value(a);
  const DenseMatrix& B = t.value(b);
  if (A.rows() != B.rows()) {
    throw ShapeError("concat_cols: row counts differ " + A.shape_string() + " vs " +
                     B.shape_string());
  }
  const std::size_t rows = A.rows(), ca = A.cols(), cb = B.cols();
  DenseMatrix out(rows, ca + cb);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < ca; ++j) out(i, j) = A(i, j);
    for (std::size_t j = 0; j < cb; ++j) out(i, ca + j) = B(i, j);
  }
  return t.record(std::move(out), [a, b, rows, ca, cb](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    {
      std::span<double> ga = tape.grad_mut(a);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < ca; ++j) ga[i * ca + j] += g[i * (ca + cb) + j];
    }
    std::span<double> gb = tape.grad_mut(b);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cb; ++j) gb[i * cb + j] += g[i * (ca + cb) + ca + j];
  });
}

Var gather_rows(Tape& t, Var table, std::span<const std::size_t> ids) {
  const DenseMatrix& T = t.value(table);
  const std::size_t cols = T.cols();
  DenseMatrix out(ids.size(), cols);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= T.rows()) {
      throw ShapeError("gather_rows: row " + std::to_string(ids[i]) + " outside " +
                       T.shape_string());
    }
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = T(ids[i], j);
  }
  std::vector<std::size_t> idx(ids.begin(), ids.end());
  return t.record(std::move(out), [table, cols, idx = std::move(idx)](Tape& tape,
                                                                       std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    std::span<double> gt = tape.grad_mut(table);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) gt[idx[i] * cols + j] += g[i * cols + j];
  });
}

Var row(Tape& t, Var a, std::size_t r) {
  const std::size_t id = r;
  return gather_rows(t, a, std::span<const std::size_t>(&id, 1));
}

Var stack_rows(Tape& t, std::span<const Var> rows) {
  if (rows.empty()) throw ShapeError("stack_rows: no inputs");
  const std::size_t cols = t.value(rows.front()).cols();
  std::vector<std::size_t> counts;
  counts.reserve(rows.size());
  std::size_t total = 0;
  for (Var v : rows) {
    const DenseMatrix& m = t.value(v);
    if (m.cols() != cols) {
      throw ShapeError("stack_rows: column counts differ " + m.shape_string() + " vs " +
                       std::to_string(cols));
    }
    counts.push_back(m.rows());
    total += m.rows();
  }
  std::vector<double> values;
  values.reserve(total * cols);
  for (Var v : rows) {
    auto src = t.value(v).values();
    values.insert(values.end(), src.begin(), src.end());
  }
  std::vector<Var> inputs(rows.begin(), rows.end());
  return t.record(DenseMatrix(total, cols, std::move(values)),
                  [inputs = std::move(inputs), counts = std::move(counts), cols](
                      Tape& tape, std::size_t self) {
                    std::span<const double> g = tape.node_grad(self);
                    std::size_t offset = 0;
                    for (std::size_t k = 0; k < inputs.size(); ++k) {
                      std::span<double> gi = tape.grad_mut(inputs[k]);
                      const std::size_t n = counts[k] * cols;
                      for (std::size_t i = 0; i < n; ++i) gi[i] += g[offset + i];
                      offset += n;
                    }
                  });
}

Var sum_rows(Tape& t, Var a) {
  const DenseMatrix& A = t.value(a);
  const std::size_t rows = A.rows(), cols = A.cols();
  DenseMatrix out(1, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(0, j) += A(i, j);
  return t.record(std::move(out), [a, rows, cols](Tape& tape, std::size_t self) {
    std::span<const double> g = tape.node_grad(self);
    std::span<double> ga = tape.grad_mut(a);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) ga[i * cols + j] += g[j];
  });
}

Var sum_squares(Tape& t, Var a) {
  double s = 0.0;
  for (double x : t.value(a).values()) s += x * x;
  return t.record(DenseMatrix(1, 1, s), [a](Tape& tape, std::size_t self) {
    const double g = tape.node_grad(self)[0];
    auto av = tape.value(a).values();
    std::span<double> ga = tape.grad_mut(a);
    for (std::size_t i = 0; i < av.size(); ++i) ga[i] += 2.0 * g * av[i];
  });
}

Var masked_cross_entropy(Tape& t, Var probs, const DenseMatrix& labels,
                         std::span<const std::size_t> rows, double clamp) {
  const DenseMatrix& Z = t.value(probs);
  require_same_shape("masked_cross_entropy", Z, labels);
  double loss = 0.0;
  for (std::size_t d : rows) {
    if (d >= Z.rows()) throw ShapeError("masked_cross_entropy: row index out of range");
    for (std::size_t f = 0; f < Z.cols(); ++f) {
      const double y = labels(d, f);
      if (y != 0.0) loss -= y * std::log(std::max(Z(d, f), clamp));
    }
  }
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return t.record(DenseMatrix(1, 1, loss),
                  [probs, labels, clamp, idx = std::move(idx)](Tape& tape, std::size_t self) {
                    const double g = tape.node_grad(self)[0];
                    const DenseMatrix& z = tape.value(probs);
                    std::span<double> gz = tape.grad_mut(probs);
                    const std::size_t cols = z.cols();
                    for (std::size_t d : idx)
                      for (std::size_t f = 0; f < cols; ++f) {
                        const double y = labels(d, f);
                        if (y != 0.0 && z(d, f) > clamp) gz[d * cols + f] -= g * y / z(d, f);
                      }
                  });
}

// ---- plain conveniences ----------------------------------------------------

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: cannot multiply " + a.shape_string() + " by " + b.shape_string());
  }
  DenseMatrix c(a.rows(), b.cols());
  gemm_acc(a.values().data(), b.values().data(), c.values().data(), a.rows(), a.cols(), b.cols());
  return c;
}

DenseMatrix activation(Activation kind, const DenseMatrix& x) {
  DenseMatrix out = x.detached();
  for (double& v : out.values()) v = apply(kind, v);
  return out;
}

DenseMatrix rowwise_softmax(const DenseMatrix& x) {
  DenseMatrix out = x.detached();
  softmax_rows_inplace(out);
  return out;
}

DenseMatrix dropout(const DenseMatrix& x, double p, Rng& rng, bool training) {
  Tape t;
  return t.value(dropout(t, t.constant(x), p, rng, training));
}

}  // namespace fagcn
