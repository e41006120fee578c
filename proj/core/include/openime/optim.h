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

#ifndef OPENIME_OPTIM_H_
#define OPENIME_OPTIM_H_

#include <cstdint>
#include <random>
#include <span>

#include "openime/autograd.h"

namespace openime {
inline namespace OPENIME_NN_NS {

// Seeded generator for initialization and dropout masks. The conversion to
// reals is done here rather than through <random> distributions, whose
// output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

  void FillUniform(Tensor& t, double lo, double hi) {
    for (auto& x : t.data()) x = static_cast<Real>(Uniform(lo, hi));
  }

 private:
  std::mt19937_64 engine_;
};

struct SgdOptions {
  Real learning_rate = 1;
  Real clip_norm = 5;  // global L2 norm; <= 0 disables clipping
};

// p -= lr * g over all parameters after global-norm clipping, then zeroes
// the gradients. Returns the gradient norm before clipping. Throws
// NumericError, leaving parameters untouched, when any gradient is not
// finite.
double SgdStep(std::span<Parameter* const> params, const SgdOptions& options);

// Constant `base` through epoch `halve_after` (1-based), then halved every
// epoch.
double LearningRateForEpoch(int epoch, double base, int halve_after);

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_OPTIM_H_
