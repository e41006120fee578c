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

#include "openime/optim.h"

#include <cmath>
#include <string>

#include "openime/error.h"

namespace openime {
inline namespace OPENIME_NN_NS {

double SgdStep(std::span<Parameter* const> params, const SgdOptions& options) {
  double sq = 0;
  for (const Parameter* p : params) {
    for (Real g : p->grad.data()) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient in parameter " + p->name);
      sq += static_cast<double>(g) * g;
    }
  }
  const double norm = std::sqrt(sq);
  double scale = options.learning_rate;
  if (options.clip_norm > 0 && norm > options.clip_norm) scale *= options.clip_norm / norm;
  for (Parameter* p : params) {
    auto value = p->value.data();
    auto grad = p->grad.data();
    for (std::size_t i = 0; i < value.size(); ++i) {
      value[i] -= static_cast<Real>(scale * grad[i]);
      grad[i] = 0;
    }
  }
  return norm;
}

double LearningRateForEpoch(int epoch, double base, int halve_after) {
  if (epoch <= halve_after) return base;
  return std::ldexp(base, -(epoch - halve_after));
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
