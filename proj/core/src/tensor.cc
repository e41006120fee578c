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

#include "openime/tensor.h"

#include <algorithm>

#include "openime/error.h"

namespace openime {
inline namespace OPENIME_NN_NS {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, Real fill) : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<Real> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != NumElements(shape_)) {
    throw ContractError("tensor data length " + std::to_string(data_.size()) +
                        " does not match shape " + ShapeString(shape_));
  }
}

Tensor Tensor::Vector(std::initializer_list<Real> values) {
  return Tensor({values.size()}, std::vector<Real>(values));
}

void Tensor::Fill(Real value) { std::fill(data_.begin(), data_.end(), value); }

void Tensor::Resize(Shape shape) {
  shape_ = std::move(shape);
  data_.assign(NumElements(shape_), Real(0));
}

void Tensor::Accumulate(const Tensor& other) {
  if (other.data_.size() != data_.size()) {
    throw ContractError("accumulate: shape " + ShapeString(other.shape_) + " into " +
                        ShapeString(shape_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
