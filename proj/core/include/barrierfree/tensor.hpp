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
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace barrierfree::kernels {

// Dimension indices of a rank-3 feature map.
enum class Axis : int { kChannels = 0, kHeight = 1, kWidth = 2 };

struct Shape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return channels * height * width; }
  std::size_t operator[](int axis) const;
  std::size_t& operator[](int axis);
  std::array<std::size_t, 3> dims() const { return {channels, height, width}; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

// Dense C x H x W tensor stored row-major with the channel index outermost.
// Every element is finite; construction rejects NaN and infinity.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  double operator()(std::size_t c, std::size_t h, std::size_t w) const {
    return data_[offset(c, h, w)];
  }
  double& operator()(std::size_t c, std::size_t h, std::size_t w) {
    return data_[offset(c, h, w)];
  }
  // Access by a (dim0, dim1, dim2) index triple.
  double at(const std::array<std::size_t, 3>& idx) const {
    return data_[offset(idx[0], idx[1], idx[2])];
  }
  double& at(const std::array<std::size_t, 3>& idx) {
    return data_[offset(idx[0], idx[1], idx[2])];
  }

  // Channel-wise concatenation; all parts must share height and width.
  static Tensor concat_channels(std::span<const Tensor> parts);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t offset(std::size_t c, std::size_t h, std::size_t w) const {
    return (c * shape_.height + h) * shape_.width + w;
  }

  Shape shape_;
  std::vector<double> data_;
};

// Elementwise comparison helper for tests and the self-check suite.
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace barrierfree::kernels
