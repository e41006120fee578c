// Copyright 2026 The OpenIME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reverse-mode automatic differentiation over a dynamic tape.
//
// A Tape records every primitive in creation order, so inputs always precede
// the node that consumes them. Backward() walks the record in reverse.
// Parameter leaves do not copy their tensor; their gradients accumulate
// straight into Parameter::grad, which is how a minibatch sums over several
// tapes before one optimizer step.
//
// Shapes: rank 0 is a scalar, rank 1 a vector, rank 2 a row-major matrix.

#ifndef OPENIME_AUTOGRAD_H_
#define OPENIME_AUTOGRAD_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "openime/tensor.h"

namespace openime {
inline namespace OPENIME_NN_NS {

class Rng;

struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value)
      : name(std::move(name)), value(std::move(value)), grad(this->value.shape()) {}

  std::string name;
  Tensor value;
  mutable Tensor grad;

  void ZeroGrad() const { grad.Fill(0); }
};

class Tape;

class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }
  // Gradient after Backward(); zeros if nothing flowed here.
  const Tensor& grad() const;

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int self)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const { return grad_enabled_; }
  std::size_t size() const { return nodes_.size(); }

  Var Constant(Tensor value);
  // Leaf bound to `param`; param must outlive the tape.
  Var Param(const Parameter& param);

  // Records an op result. `backward` is dropped when no input needs a
  // gradient or the tape is in inference mode.
  Var Record(Tensor value, std::vector<int> inputs, BackwardFn backward);

  const Tensor& Value(int id) const;
  bool RequiresGrad(int id) const { return nodes_[id].requires_grad; }
  // Gradient buffer of a node, allocated as zeros on first use.
  Tensor& Grad(int id);
  const Tensor& GradIfAny(int id) const;

  // Seeds d(root)/d(root) = 1 for a scalar root and propagates.
  void Backward(const Var& root);

 private:
  struct Node {
    Tensor value;
    const Tensor* value_ref = nullptr;
    Tensor grad;
    Tensor* grad_ref = nullptr;
    std::vector<int> inputs;
    BackwardFn backward;
    bool requires_grad = false;
  };

  bool grad_enabled_;
  std::vector<Node> nodes_;
};

// Primitives. All throw ContractError on shape mismatch, naming the op and
// the shapes involved.

// (m,k)x(k,n)->(m,n); (m,k)x(k)->(m); (k)x(k,n)->(n).
Var Matmul(const Var& a, const Var& b);
// Same shapes, or a rank-2 `a` plus a rank-1 `b` broadcast over rows.
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, Real factor);
// Joins along the last axis; all parts share the leading shape.
Var Concat(std::span<const Var> parts);
// Rank-1 parts of equal length become the rows of a matrix.
Var Stack(std::span<const Var> rows);
// Half-open range [begin, end) of the last axis.
Var Slice(const Var& a, std::size_t begin, std::size_t end);
Var Sigmoid(const Var& a);
Var Tanh(const Var& a);
// Softmax of a vector, or of each row of a matrix.
Var Softmax(const Var& a);
// Rows of a rank-2 table; index -1 yields a constant row of `fill`.
Var GatherRows(const Var& table, std::span<const std::int64_t> ids, Real fill = 0);
// One row of a matrix as a vector.
Var Row(const Var& a, std::size_t index);
// Inverted dropout; identity when !train or p == 0.
Var Dropout(const Var& a, Real p, bool train, Rng& rng);
Var Sum(const Var& a);
// -log softmax(logits)[target] for a vector of logits.
Var CrossEntropy(const Var& logits, std::size_t target);

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_AUTOGRAD_H_
