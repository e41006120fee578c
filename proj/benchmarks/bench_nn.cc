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


#include <benchmark/benchmark.h>

#include "openime/autograd.h"
#include "openime/optim.h"

namespace {

using namespace openime;

// One LSTM step (input and hidden of width n) as the decoder computes it,
// forward only or forward plus backward.
void LstmStep(benchmark::State& state, bool backward) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  Parameter w("w", Tensor({4 * n, 2 * n}));
  Parameter b("b", Tensor({4 * n}));
  rng.FillUniform(w.value, -0.1, 0.1);
  Tensor x({n}), h({n}), c({n});
  rng.FillUniform(x, -1, 1);
  rng.FillUniform(h, -1, 1);
  rng.FillUniform(c, -1, 1);
  for (auto _ : state) {
    Tape tape(backward);
    Var parts[] = {tape.Constant(x), tape.Constant(h)};
    Var z = Add(Matmul(tape.Param(w), Concat(parts)), tape.Param(b));
    Var i = Sigmoid(Slice(z, 0, n));
    Var f = Sigmoid(Slice(z, n, 2 * n));
    Var g = Tanh(Slice(z, 2 * n, 3 * n));
    Var o = Sigmoid(Slice(z, 3 * n, 4 * n));
    Var c2 = Add(Mul(f, tape.Constant(c)), Mul(i, g));
    Var h2 = Mul(o, Tanh(c2));
    if (backward) tape.Backward(Sum(h2));
    benchmark::DoNotOptimize(h2.value().data().data());
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_LstmForward(benchmark::State& state) { LstmStep(state, false); }
void BM_LstmForwardBackward(benchmark::State& state) { LstmStep(state, true); }
BENCHMARK(BM_LstmForward)->Arg(64)->Arg(128)->Arg(500);
BENCHMARK(BM_LstmForwardBackward)->Arg(64)->Arg(128)->Arg(500);

void BM_SoftmaxCrossEntropy(benchmark::State& state) {
  const auto v = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  Tensor logits({v});
  rng.FillUniform(logits, -3, 3);
  for (auto _ : state) {
    Tape tape;
    Var x = tape.Constant(logits);
    benchmark::DoNotOptimize(CrossEntropy(x, v / 2).value().data().data());
  }
}
BENCHMARK(BM_SoftmaxCrossEntropy)->RangeMultiplier(4)->Range(16, 16384);

}  // namespace

BENCHMARK_MAIN();
