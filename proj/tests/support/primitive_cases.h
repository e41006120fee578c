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

// One gradient-check case per primitive, on random shapes up to 8. Every
// op output is reduced with a fixed random weighting so that no gradient
// component is trivially symmetric.

#ifndef OPENIME_TESTS_PRIMITIVE_CASES_H_
#define OPENIME_TESTS_PRIMITIVE_CASES_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gradcheck.h"
#include "openime/autograd.h"
#include "openime/optim.h"

namespace openime::testing {

struct PrimitiveCase {
  std::string name;
  std::function<GradReport()> run;
};

inline std::vector<PrimitiveCase> PrimitiveCases(std::uint64_t seed) {
  struct State {
    explicit State(std::uint64_t s) : rng(s) {}
    Rng rng;
    std::size_t Dim() { return 1 + rng.Below(8); }
    std::shared_ptr<Parameter> Make(const std::string& name, Shape shape, double lo = -1, double hi = 1) {
      Tensor t(std::move(shape));
      rng.FillUniform(t, lo, hi);
      return std::make_shared<Parameter>(name, std::move(t));
    }
    // Weighted sum so every output element gets a distinct cotangent.
    Var Reduce(Tape& tape, const Var& v, std::uint64_t salt) {
      Rng r(salt);
      Tensor w(v.shape());
      r.FillUniform(w, -1, 1);
      return Sum(Mul(v, tape.Constant(std::move(w))));
    }
  };
  auto st = std::make_shared<State>(seed);
  std::vector<PrimitiveCase> cases;

  auto unary = [&](const std::string& name, std::function<Var(const Var&)> op, bool matrix) {
    auto a = matrix ? st->Make("a", {st->Dim(), st->Dim()}) : st->Make("a", {st->Dim()});
    cases.push_back({name, [st, a, op]() {
                       return CheckGradients({a.get()}, [&](Tape& t) {
                         return st->Reduce(t, op(t.Param(*a)), 11);
                       });
                     }});
  };
  auto binary = [&](const std::string& name, Shape sa, Shape sb,
                    std::function<Var(const Var&, const Var&)> op) {
    auto a = st->Make("a", sa);
    auto b = st->Make("b", sb);
    cases.push_back({name, [st, a, b, op]() {
                       return CheckGradients({a.get(), b.get()}, [&](Tape& t) {
                         return st->Reduce(t, op(t.Param(*a), t.Param(*b)), 12);
                       });
                     }});
  };

  {
    const std::size_t m = st->Dim(), k = st->Dim(), n = st->Dim();
    binary("matmul_mm", {m, k}, {k, n}, [](const Var& a, const Var& b) { return Matmul(a, b); });
    binary("matmul_mv", {m, k}, {k}, [](const Var& a, const Var& b) { return Matmul(a, b); });
    binary("matmul_vm", {k}, {k, n}, [](const Var& a, const Var& b) { return Matmul(a, b); });
  }
  {
    const std::size_t r = st->Dim(), c = st->Dim();
    binary("add", {r, c}, {r, c}, [](const Var& a, const Var& b) { return Add(a, b); });
    binary("add_broadcast", {r, c}, {c}, [](const Var& a, const Var& b) { return Add(a, b); });
    binary("sub", {r, c}, {r, c}, [](const Var& a, const Var& b) { return Sub(a, b); });
    binary("mul", {r, c}, {r, c}, [](const Var& a, const Var& b) { return Mul(a, b); });
    binary("concat_vectors", {c}, {r}, [](const Var& a, const Var& b) {
      const Var parts[] = {a, b, a};
      return Concat(parts);
    });
    const std::size_t c2 = st->Dim();
    binary("concat_matrices", {r, c}, {r, c2}, [](const Var& a, const Var& b) {
      const Var parts[] = {a, b};
      return Concat(parts);
    });
    binary("stack", {c}, {c}, [](const Var& a, const Var& b) {
      const Var rows[] = {a, b, a};
      return Stack(rows);
    });
  }
  unary("scale", [](const Var& a) { return Scale(a, Real(-1.7)); }, true);
  unary("sigmoid", [](const Var& a) { return Sigmoid(a); }, true);
  unary("tanh", [](const Var& a) { return Tanh(a); }, true);
  unary("softmax_vector", [](const Var& a) { return Softmax(a); }, false);
  unary("softmax_rows", [](const Var& a) { return Softmax(a); }, true);
  unary("sum", [](const Var& a) { return Scale(Sum(a), Real(0.5)); }, true);
  {
    const std::size_t cols = st->Dim();
    auto a = st->Make("a", {cols + 1});
    const std::size_t begin = st->rng.Below(cols), end = begin + 1 + st->rng.Below(cols - begin);
    cases.push_back({"slice_vector", [st, a, begin, end]() {
                       return CheckGradients({a.get()}, [&](Tape& t) {
                         return st->Reduce(t, Slice(t.Param(*a), begin, end), 13);
                       });
                     }});
    auto m = st->Make("m", {st->Dim(), cols + 1});
    cases.push_back({"slice_columns", [st, m, begin, end]() {
                       return CheckGradients({m.get()}, [&](Tape& t) {
                         return st->Reduce(t, Slice(t.Param(*m), begin, end), 14);
                       });
                     }});
  }
  {
    const std::size_t rows = st->Dim();
    auto table = st->Make("table", {rows, st->Dim()});
    std::vector<std::int64_t> ids;
    for (std::size_t i = 0; i < 6; ++i) ids.push_back(static_cast<std::int64_t>(st->rng.Below(rows)));
    ids.push_back(-1);
    ids.push_back(ids[0]);  // repeated row accumulates
    cases.push_back({"embedding_gather", [st, table, ids]() {
                       return CheckGradients({table.get()}, [&](Tape& t) {
                         return st->Reduce(t, GatherRows(t.Param(*table), ids, Real(1)), 15);
                       });
                     }});
    const std::size_t pick = st->rng.Below(rows);
    cases.push_back({"row", [st, table, pick]() {
                       return CheckGradients({table.get()}, [&](Tape& t) {
                         return st->Reduce(t, Row(t.Param(*table), pick), 16);
                       });
                     }});
  }
  {
    auto a = st->Make("a", {st->Dim(), st->Dim()});
    cases.push_back({"dropout", [st, a]() {
                       return CheckGradients({a.get()}, [&](Tape& t) {
                         Rng mask_rng(99);  // same mask on every evaluation
                         return st->Reduce(t, Dropout(t.Param(*a), Real(0.3), true, mask_rng), 17);
                       });
                     }});
  }
  {
    const std::size_t n = st->Dim() + 1;
    auto logits = st->Make("logits", {n}, -2, 2);
    const std::size_t target = st->rng.Below(n);
    cases.push_back({"cross_entropy", [logits, target]() {
                       return CheckGradients({logits.get()}, [&](Tape& t) {
                         return CrossEntropy(t.Param(*logits), target);
                       });
                     }});
  }
  return cases;
}

}  // namespace openime::testing

#endif  // OPENIME_TESTS_PRIMITIVE_CASES_H_
