// Copyright 2026 The barrierfree Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "barrierfree/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "barrierfree/error.hpp"

namespace barrierfree::kernels {

std::size_t Shape::operator[](int axis) const {
  switch (axis) {
    case 0: return channels;
    case 1: return height;
    case 2: return width;
  }
  throw DimensionError("axis " + std::to_string(axis) + " out of range [0, 2]");
}

std::size_t& Shape::operator[](int axis) {
  switch (axis) {
    case 0: return channels;
    case 1: return height;
    case 2: return width;
  }
  throw DimensionError("axis " + std::to_string(axis) + " out of range [0, 2]");
}

std::string to_string(const Shape& shape) {
  return std::to_string(shape.channels) + "x" + std::to_string(shape.height) +
         "x" + std::to_string(shape.width);
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(shape), data_(shape.size(), fill) {
  if (!std::isfinite(fill)) throw DomainError("tensor fill value is not finite");
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    throw DimensionError("tensor of shape " + to_string(shape_) + " needs " +
                         std::to_string(shape_.size()) + " values, got " +
                         std::to_string(data_.size()));
  }
  if (!std::all_of(data_.begin(), data_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw DomainError("tensor data contains a non-finite value");
  }
}

Tensor Tensor::concat_channels(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_channels: no inputs");
  Shape out = parts.front().shape();
  out.channels = 0;
  for (const auto& p : parts) {
    if (p.height() != out.height || p.width() != out.width) {
      throw DimensionError("concat_channels: spatial size mismatch " +
                           to_string(p.shape()) + " vs " + to_string(out));
    }
    out.channels += p.channels();
  }
  std::vector<double> data;
  data.reserve(out.size());
  for (const auto& p : parts) data.insert(data.end(), p.data_.begin(), p.data_.end());
  Tensor t;
  t.shape_ = out;
  t.data_ = std::move(data);
  return t;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("max_abs_diff: shape " + to_string(a.shape()) +
                         " vs " + to_string(b.shape()));
  }
  double m = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace barrierfree::kernels
