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

// Built against the 64-bit numeric library.

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gradcheck.h"
#include "openime/autograd.h"
#include "openime/error.h"
#include "openime/optim.h"
#include "primitive_cases.h"

namespace openime {
namespace {

static_assert(std::is_same_v<Real, double>);

TEST(Autograd, SoftmaxOfZerosIsUniform) {
  Tape t;
  Var y = Softmax(t.Constant(Tensor({3})));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(y.value()[i], 1.0 / 3);
}

TEST(Autograd, SigmoidSlopeAtZero) {
  Parameter x("x", Tensor({1}, 0.0));
  Tape t;
  Var y = Sum(Sigmoid(t.Param(x)));
  t.Backward(y);
  EXPECT_DOUBLE_EQ(x.grad[0], 0.25);
}

TEST(Autograd, ShapeErrorsNameTheOp) {
  Tape t;
  Var a = t.Constant(Tensor({2, 3}));
  Var b = t.Constant(Tensor({2, 3}));
  try {
    Matmul(a, b);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("matmul"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("[2,3]"), std::string::npos);
  }
  EXPECT_THROW(Mul(a, t.Constant(Tensor({3}))), ContractError);
  EXPECT_THROW(Slice(a, 2, 5), ContractError);
  EXPECT_THROW(CrossEntropy(t.Constant(Tensor({3})), 3), ContractError);
  EXPECT_THROW(Tensor({2, 2}, std::vector<Real>{1, 2, 3}), ContractError);
}

TEST(Autograd, GradientsAccumulateAcrossTapes) {
  Parameter x("x", Tensor({2}, 1.0));
  for (int i = 0; i < 3; ++i) {
    Tape t;
    t.Backward(Sum(t.Param(x)));
  }
  EXPECT_DOUBLE_EQ(x.grad[0], 3.0);
}

TEST(Autograd, InferenceTapeRecordsNoGradient) {
  Parameter x("x", Tensor({2}, 1.0));
  Tape t(false);
  Var y = Sum(Tanh(t.Param(x)));
  EXPECT_THROW(t.Backward(y), ContractError);
  EXPECT_DOUBLE_EQ(x.grad[0], 0.0);
}

TEST(Autograd, DropoutIdentityWhenNotTraining) {
  Rng rng(1);
  Tape t;
  Tensor v({4}, 2.0);
  Var a = t.Constant(v);
  EXPECT_EQ(Dropout(a, 0.5, false, rng).value(), v);
  Var d = Dropout(a, 0.5, true, rng);
  for (Real x : d.value().data()) EXPECT_TRUE(x == 0.0 || x == 4.0);
}

TEST(Autograd, EveryPrimitivePassesFiniteDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (const auto& c : testing::PrimitiveCases(seed)) {
      const auto report = c.run();
      EXPECT_LE(report.max_rel_error, 1e-4) << c.name << " seed " << seed << " worst " << report.worst;
    }
  }
}

TEST(Autograd, RestrictedCrossEntropyEqualsMaskedFullSoftmax) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.Below(12);
    Tensor full({n});
    rng.FillUniform(full, -3, 3);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.Below(2) == 0) active.push_back(i);
    }
    if (active.empty()) active.push_back(0);
    const std::size_t target = rng.Below(active.size());
    Tensor restricted({active.size()});
    Tensor masked({n}, -std::numeric_limits<Real>::infinity());
    for (std::size_t i = 0; i < active.size(); ++i) {
      restricted[i] = full[active[i]];
      masked[active[i]] = full[active[i]];
    }
    Tape t(false);
    const double a = CrossEntropy(t.Constant(restricted), target).value()[0];
    const double b = CrossEntropy(t.Constant(masked), active[target]).value()[0];
    EXPECT_NEAR(a, b, 1e-12);
  }
}

TEST(Sgd, PlainStep) {
  Parameter p("p", Tensor({1}, 1.0));
  p.grad[0] = 0.5;
  Parameter* ps[] = {&p};
  SgdStep(ps, {1.0, 0});
  EXPECT_DOUBLE_EQ(p.value[0], 0.5);
  EXPECT_DOUBLE_EQ(p.grad[0], 0.0);
}

TEST(Sgd, ClippingHalvesTheStep) {
  Parameter p("p", Tensor({2}, 0.0));
  p.grad[0] = 2;  // norm 2
  Parameter* ps[] = {&p};
  const double norm = SgdStep(ps, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(norm, 2.0);
  EXPECT_DOUBLE_EQ(p.value[0], -1.0);
}

TEST(Sgd, NonFiniteGradientThrowsWithoutUpdating) {
  Parameter p("layer.w", Tensor({2}, 1.0));
  p.grad[1] = std::numeric_limits<Real>::quiet_NaN();
  Parameter* ps[] = {&p};
  try {
    SgdStep(ps, {1.0, 5});
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("layer.w"), std::string::npos);
  }
  EXPECT_DOUBLE_EQ(p.value[0], 1.0);
}

TEST(Sgd, LearningRateSchedule) {
  for (int e = 1; e <= 9; ++e) EXPECT_DOUBLE_EQ(LearningRateForEpoch(e, 1.0, 9), 1.0);
  EXPECT_DOUBLE_EQ(LearningRateForEpoch(10, 1.0, 9), 0.5);
  EXPECT_DOUBLE_EQ(LearningRateForEpoch(11, 1.0, 9), 0.25);
}

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42), c(43);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.Next();
    EXPECT_EQ(x, b.Next());
    differ = differ || x != c.Next();
  }
  EXPECT_TRUE(differ);
}

TEST(Rng, UniformInitStatistics) {
  Rng rng(7);
  Tensor t({100000});
  rng.FillUniform(t, -0.08, 0.08);
  double sum = 0;
  for (Real x : t.data()) {
    ASSERT_GE(x, -0.08);
    ASSERT_LT(x, 0.08);
    sum += x;
  }
  EXPECT_NEAR(sum / 100000, 0.0, 0.005);
}

}  // namespace
}  // namespace openime
