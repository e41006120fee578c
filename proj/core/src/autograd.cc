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

#include "openime/autograd.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "openime/error.h"
#include "openime/optim.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<Matrix>;
using MapCM = Eigen::Map<const Matrix>;

MapCM View(const Tensor& t, std::size_t rows, std::size_t cols) {
  return MapCM(t.data().data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}
MapM View(Tensor& t, std::size_t rows, std::size_t cols) {
  return MapM(t.data().data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

[[noreturn]] void ShapeFail(const char* op, const Shape& a, const Shape& b) {
  throw ContractError(std::string(op) + ": incompatible shapes " + ShapeString(a) + " and " +
                      ShapeString(b));
}

[[noreturn]] void ShapeFail(const char* op, const Shape& a) {
  throw ContractError(std::string(op) + ": unsupported shape " + ShapeString(a));
}

void SameTape(const char* op, const Var& a, const Var& b) {
  if (!a.valid() || a.tape() != b.tape()) {
    throw ContractError(std::string(op) + ": operands on different tapes");
  }
}

}  // namespace

const Tensor& Var::value() const { return tape_->Value(id_); }
const Tensor& Var::grad() const { return tape_->GradIfAny(id_); }

Var Tape::Constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::Param(const Parameter& param) {
  Node node;
  node.value_ref = &param.value;
  if (grad_enabled_) {
    if (param.grad.shape() != param.value.shape()) param.grad.Resize(param.value.shape());
    node.grad_ref = &param.grad;
    node.requires_grad = true;
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::Record(Tensor value, std::vector<int> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  if (grad_enabled_) {
    bool any = false;
    for (int in : inputs) any = any || nodes_[in].requires_grad;
    if (any) {
      node.requires_grad = true;
      node.inputs = std::move(inputs);
      node.backward = std::move(backward);
    }
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

const Tensor& Tape::Value(int id) const {
  const Node& n = nodes_[id];
  return n.value_ref ? *n.value_ref : n.value;
}

Tensor& Tape::Grad(int id) {
  Node& n = nodes_[id];
  if (n.grad_ref) return *n.grad_ref;
  if (n.grad.size() != Value(id).size()) n.grad = Tensor(Value(id).shape());
  return n.grad;
}

const Tensor& Tape::GradIfAny(int id) const {
  const Node& n = nodes_[id];
  return n.grad_ref ? *n.grad_ref : n.grad;
}

void Tape::Backward(const Var& root) {
  if (root.tape() != this) throw ContractError("backward: root belongs to another tape");
  if (!grad_enabled_) throw ContractError("backward: tape recorded without gradients");
  if (Value(root.id()).size() != 1) ShapeFail("backward", Value(root.id()).shape());
  if (!nodes_[root.id()].requires_grad) return;
  Grad(root.id())[0] += 1;
  for (int id = root.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.backward) continue;
    if (n.grad.empty()) continue;  // nothing flowed into this node
    n.backward(*this, id);
  }
}

Var Matmul(const Var& a, const Var& b) {
  SameTape("matmul", a, b);
  Tape& t = *a.tape();
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const int ia = a.id(), ib = b.id();
  if (av.rank() == 2 && bv.rank() == 2) {
    const std::size_t m = av.shape()[0], k = av.shape()[1], n = bv.shape()[1];
    if (bv.shape()[0] != k) ShapeFail("matmul", av.shape(), bv.shape());
    Tensor out({m, n});
    View(out, m, n).noalias() = View(av, m, k) * View(bv, k, n);
    return t.Record(std::move(out), {ia, ib}, [ia, ib, m, k, n](Tape& t, int self) {
      auto g = View(t.Grad(self), m, n);
      if (t.RequiresGrad(ia)) View(t.Grad(ia), m, k).noalias() += g * View(t.Value(ib), k, n).transpose();
      if (t.RequiresGrad(ib)) View(t.Grad(ib), k, n).noalias() += View(t.Value(ia), m, k).transpose() * g;
    });
  }
  if (av.rank() == 2 && bv.rank() == 1) {
    const std::size_t m = av.shape()[0], k = av.shape()[1];
    if (bv.size() != k) ShapeFail("matmul", av.shape(), bv.shape());
    Tensor out({m});
    View(out, m, 1).noalias() = View(av, m, k) * View(bv, k, 1);
    return t.Record(std::move(out), {ia, ib}, [ia, ib, m, k](Tape& t, int self) {
      auto g = View(t.Grad(self), m, 1);
      if (t.RequiresGrad(ia)) View(t.Grad(ia), m, k).noalias() += g * View(t.Value(ib), 1, k);
      if (t.RequiresGrad(ib)) View(t.Grad(ib), k, 1).noalias() += View(t.Value(ia), m, k).transpose() * g;
    });
  }
  if (av.rank() == 1 && bv.rank() == 2) {
    const std::size_t k = bv.shape()[0], n = bv.shape()[1];
    if (av.size() != k) ShapeFail("matmul", av.shape(), bv.shape());
    Tensor out({n});
    View(out, 1, n).noalias() = View(av, 1, k) * View(bv, k, n);
    return t.Record(std::move(out), {ia, ib}, [ia, ib, k, n](Tape& t, int self) {
      auto g = View(t.Grad(self), 1, n);
      if (t.RequiresGrad(ia)) View(t.Grad(ia), 1, k).noalias() += g * View(t.Value(ib), k, n).transpose();
      if (t.RequiresGrad(ib)) View(t.Grad(ib), k, n).noalias() += View(t.Value(ia), k, 1) * g;
    });
  }
  ShapeFail("matmul", av.shape(), bv.shape());
}

Var Add(const Var& a, const Var& b) {
  SameTape("add", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const int ia = a.id(), ib = b.id();
  if (av.shape() == bv.shape()) {
    Tensor out = av;
    out.Accumulate(bv);
    return a.tape()->Record(std::move(out), {ia, ib}, [ia, ib](Tape& t, int self) {
      const Tensor& g = t.Grad(self);
      if (t.RequiresGrad(ia)) t.Grad(ia).Accumulate(g);
      if (t.RequiresGrad(ib)) t.Grad(ib).Accumulate(g);
    });
  }
  if (av.rank() == 2 && bv.rank() == 1 && av.shape()[1] == bv.size()) {
    const std::size_t rows = av.shape()[0], cols = av.shape()[1];
    Tensor out = av;
    View(out, rows, cols).rowwise() += View(bv, 1, cols).row(0);
    return a.tape()->Record(std::move(out), {ia, ib}, [ia, ib, rows, cols](Tape& t, int self) {
      const Tensor& g = t.Grad(self);
      if (t.RequiresGrad(ia)) t.Grad(ia).Accumulate(g);
      if (t.RequiresGrad(ib)) View(t.Grad(ib), 1, cols).row(0) += View(g, rows, cols).colwise().sum();
    });
  }
  ShapeFail("add", av.shape(), bv.shape());
}

Var Sub(const Var& a, const Var& b) {
  SameTape("sub", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.shape() != bv.shape()) ShapeFail("sub", av.shape(), bv.shape());
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {ia, ib}, [ia, ib](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    if (t.RequiresGrad(ia)) t.Grad(ia).Accumulate(g);
    if (t.RequiresGrad(ib)) {
      Tensor& gb = t.Grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var Mul(const Var& a, const Var& b) {
  SameTape("mul", a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.shape() != bv.shape()) ShapeFail("mul", av.shape(), bv.shape());
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(std::move(out), {ia, ib}, [ia, ib](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    if (t.RequiresGrad(ia)) {
      Tensor& ga = t.Grad(ia);
      const Tensor& bv = t.Value(ib);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (t.RequiresGrad(ib)) {
      Tensor& gb = t.Grad(ib);
      const Tensor& av = t.Value(ia);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var Scale(const Var& a, Real factor) {
  Tensor out = a.value();
  for (auto& x : out.data()) x *= factor;
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia, factor](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
  });
}

Var Concat(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat: no operands");
  Tape& t = *parts[0].tape();
  const Shape& first = parts[0].shape();
  if (first.empty() || first.size() > 2) ShapeFail("concat", first);
  const std::size_t rows = first.size() == 2 ? first[0] : 1;
  std::vector<std::size_t> widths;
  std::vector<int> ids;
  std::size_t total = 0;
  for (const Var& p : parts) {
    SameTape("concat", parts[0], p);
    const Shape& s = p.shape();
    if (s.size() != first.size() || (s.size() == 2 && s[0] != rows)) ShapeFail("concat", first, s);
    widths.push_back(s.back());
    ids.push_back(p.id());
    total += s.back();
  }
  Shape shape = first.size() == 2 ? Shape{rows, total} : Shape{total};
  Tensor out(shape);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Tensor& v = parts[p].value();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(v.data().data() + r * widths[p], widths[p], out.data().data() + r * total + offset);
    }
    offset += widths[p];
  }
  return t.Record(std::move(out), ids, [ids, widths, rows, total](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    std::size_t offset = 0;
    for (std::size_t p = 0; p < ids.size(); ++p) {
      if (t.RequiresGrad(ids[p])) {
        Tensor& gp = t.Grad(ids[p]);
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < widths[p]; ++c) gp[r * widths[p] + c] += g[r * total + offset + c];
        }
      }
      offset += widths[p];
    }
  });
}

Var Stack(std::span<const Var> rows) {
  if (rows.empty()) throw ContractError("stack: no operands");
  const std::size_t cols = rows[0].size();
  std::vector<int> ids;
  Tensor out({rows.size(), cols});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    SameTape("stack", rows[0], rows[r]);
    if (rows[r].shape().size() != 1 || rows[r].size() != cols) {
      ShapeFail("stack", rows[0].shape(), rows[r].shape());
    }
    std::copy_n(rows[r].value().data().data(), cols, out.data().data() + r * cols);
    ids.push_back(rows[r].id());
  }
  return rows[0].tape()->Record(std::move(out), ids, [ids, cols](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      if (!t.RequiresGrad(ids[r])) continue;
      Tensor& gr = t.Grad(ids[r]);
      for (std::size_t c = 0; c < cols; ++c) gr[c] += g[r * cols + c];
    }
  });
}

Var Slice(const Var& a, std::size_t begin, std::size_t end) {
  const Shape& s = a.shape();
  if (s.empty() || s.size() > 2 || begin > end || end > s.back()) {
    throw ContractError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                        ") out of shape " + ShapeString(s));
  }
  const std::size_t rows = s.size() == 2 ? s[0] : 1, cols = s.back(), width = end - begin;
  Tensor out(s.size() == 2 ? Shape{rows, width} : Shape{width});
  const Tensor& av = a.value();
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(av.data().data() + r * cols + begin, width, out.data().data() + r * width);
  }
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia, rows, cols, begin, width](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < width; ++c) ga[r * cols + begin + c] += g[r * width + c];
    }
  });
}

Var Sigmoid(const Var& a) {
  Tensor out = a.value();
  for (auto& x : out.data()) x = Real(1) / (Real(1) + std::exp(-x));
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    const Tensor& y = t.Value(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (Real(1) - y[i]);
  });
}

Var Tanh(const Var& a) {
  Tensor out = a.value();
  for (auto& x : out.data()) x = std::tanh(x);
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    const Tensor& y = t.Value(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (Real(1) - y[i] * y[i]);
  });
}

Var Softmax(const Var& a) {
  const Shape& s = a.shape();
  if (s.empty() || s.size() > 2 || s.back() == 0) ShapeFail("softmax", s);
  const std::size_t rows = s.size() == 2 ? s[0] : 1, cols = s.back();
  Tensor out = a.value();
  for (std::size_t r = 0; r < rows; ++r) {
    Real* row = out.data().data() + r * cols;
    const Real mx = *std::max_element(row, row + cols);
    Real z = 0;
    for (std::size_t c = 0; c < cols; ++c) z += (row[c] = std::exp(row[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) row[c] /= z;
  }
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia, rows, cols](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    const Tensor& y = t.Value(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t r = 0; r < rows; ++r) {
      Real dot = 0;
      for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * y[r * cols + c];
      for (std::size_t c = 0; c < cols; ++c) {
        ga[r * cols + c] += y[r * cols + c] * (g[r * cols + c] - dot);
      }
    }
  });
}

Var GatherRows(const Var& table, std::span<const std::int64_t> ids, Real fill) {
  const Shape& s = table.shape();
  if (s.size() != 2) ShapeFail("gather", s);
  const std::size_t rows = s[0], cols = s[1];
  Tensor out({ids.size(), cols});
  const Tensor& tv = table.value();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Real* dst = out.data().data() + i * cols;
    if (ids[i] < 0) {
      std::fill_n(dst, cols, fill);
    } else if (static_cast<std::size_t>(ids[i]) >= rows) {
      throw ContractError("gather: row " + std::to_string(ids[i]) + " out of table " +
                          ShapeString(s));
    } else {
      std::copy_n(tv.data().data() + ids[i] * cols, cols, dst);
    }
  }
  const int it = table.id();
  std::vector<std::int64_t> index(ids.begin(), ids.end());
  return table.tape()->Record(std::move(out), {it}, [it, index = std::move(index), cols](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    Tensor& gt = t.Grad(it);
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (index[i] < 0) continue;
      Real* dst = gt.data().data() + index[i] * cols;
      const Real* src = g.data().data() + i * cols;
      for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
    }
  });
}

Var Row(const Var& a, std::size_t index) {
  const Shape& s = a.shape();
  if (s.size() != 2 || index >= s[0]) {
    throw ContractError("row: index " + std::to_string(index) + " out of shape " + ShapeString(s));
  }
  const std::size_t cols = s[1];
  Tensor out({cols});
  std::copy_n(a.value().data().data() + index * cols, cols, out.data().data());
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia, index, cols](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t c = 0; c < cols; ++c) ga[index * cols + c] += g[c];
  });
}

Var Dropout(const Var& a, Real p, bool train, Rng& rng) {
  if (p < 0 || p >= 1) throw ContractError("dropout: probability must be in [0,1)");
  if (!train || p == 0) return a;
  const Real keep = Real(1) - p;
  Tensor mask(a.shape());
  for (auto& m : mask.data()) m = rng.Uniform01() < keep ? Real(1) / keep : Real(0);
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  const int ia = a.id();
  return a.tape()->Record(std::move(out), {ia}, [ia, mask = std::move(mask)](Tape& t, int self) {
    const Tensor& g = t.Grad(self);
    Tensor& ga = t.Grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
  });
}

Var Sum(const Var& a) {
  Real total = 0;
  for (Real x : a.value().data()) total += x;
  const int ia = a.id();
  return a.tape()->Record(Tensor(Shape{}, total), {ia}, [ia](Tape& t, int self) {
    const Real g = t.Grad(self)[0];
    for (auto& x : t.Grad(ia).data()) x += g;
  });
}

Var CrossEntropy(const Var& logits, std::size_t target) {
  const Shape& s = logits.shape();
  if (s.size() != 1 || s[0] == 0) ShapeFail("cross_entropy", s);
  if (target >= s[0]) {
    throw ContractError("cross_entropy: target " + std::to_string(target) + " outside " +
                        ShapeString(s));
  }
  const Tensor& z = logits.value();
  const Real mx = *std::max_element(z.data().begin(), z.data().end());
  Real sum = 0;
  for (Real x : z.data()) sum += std::exp(x - mx);
  const Real lse = mx + std::log(sum);
  const int il = logits.id();
  return logits.tape()->Record(Tensor(Shape{}, lse - z[target]), {il}, [il, target, lse](Tape& t, int self) {
    const Real g = t.Grad(self)[0];
    const Tensor& z = t.Value(il);
    Tensor& gz = t.Grad(il);
    for (std::size_t i = 0; i < z.size(); ++i) gz[i] += g * std::exp(z[i] - lse);
    gz[target] -= g;
  });
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
