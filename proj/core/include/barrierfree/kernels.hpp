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
#include <vector>

#include "barrierfree/tensor.hpp"

namespace barrierfree::kernels {

enum class Rotation { kClockwise, kCounterClockwise };

// Concatenates the max slice and the mean slice taken across `axis`; the
// result has extent 2 along `axis` (index 0 = max, index 1 = mean).
Tensor zpool(const Tensor& t, int axis);
inline Tensor zpool(const Tensor& t, Axis axis) {
  return zpool(t, static_cast<int>(axis));
}

// Rotates the (dim_a, dim_b) plane by 90 degrees. The output swaps the
// extents of the two dimensions. Rotating back in the opposite direction
// restores the input exactly.
Tensor rotate_dims(const Tensor& t, int dim_a, int dim_b, Rotation direction);

// Convolution weights laid out as [out][in][kh][kw], plus an optional bias.
class ConvKernel {
 public:
  ConvKernel() = default;
  ConvKernel(std::size_t out_channels, std::size_t in_channels,
             std::size_t kernel_h, std::size_t kernel_w,
             std::vector<double> weights, std::vector<double> bias = {});

  // Pointwise kernel that copies input channel i to output channel i.
  static ConvKernel identity(std::size_t channels);
  static ConvKernel constant(std::size_t out_channels, std::size_t in_channels,
                             std::size_t kernel_size, double value);

  std::size_t out_channels() const { return out_; }
  std::size_t in_channels() const { return in_; }
  std::size_t kernel_h() const { return kh_; }
  std::size_t kernel_w() const { return kw_; }
  bool has_bias() const { return !bias_.empty(); }

  double weight(std::size_t o, std::size_t i, std::size_t y,
                std::size_t x) const {
    return weights_[((o * in_ + i) * kh_ + y) * kw_ + x];
  }
  double bias(std::size_t o) const { return bias_.empty() ? 0.0 : bias_[o]; }

  // Padding that preserves spatial size at unit stride (odd kernels only).
  std::size_t same_padding() const;

 private:
  std::size_t out_ = 0;
  std::size_t in_ = 0;
  std::size_t kh_ = 0;
  std::size_t kw_ = 0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// Stride-1 cross-correlation (no kernel flip) with symmetric zero padding.
Tensor conv2d_unit_stride(const Tensor& t, const ConvKernel& kernel,
                          std::size_t padding);

// Same as above with padding chosen to preserve H and W.
Tensor conv2d_same(const Tensor& t, const ConvKernel& kernel);

// Stride-1 max pooling; out-of-range taps are ignored, so the spatial size
// is preserved for odd `kernel_size`.
Tensor max_pool2d_same(const Tensor& t, std::size_t kernel_size);

double sigmoid(double x);
double silu(double x);

// ---------------------------------------------------------------------------
// Triplet attention

struct TripletParams {
  // One 2 -> 1 channel k x k kernel per branch: [0] channel/height,
  // [1] channel/width, [2] height/width (spatial).
  std::array<ConvKernel, 3> branch_kernels;
  std::size_t kernel_size = 7;
  // Forces every gate to 1, which turns the module into the identity.
  bool bypass_gates = false;

  // Validates kernel shapes and the odd kernel size.
  void validate() const;
};

TripletParams make_triplet_params(std::vector<double> branch0,
                                  std::vector<double> branch1,
                                  std::vector<double> branch2,
                                  std::size_t kernel_size = 7);

// Mean of the three gated branches, each rotated back to C x H x W.
Tensor triplet_attention(const Tensor& t, const TripletParams& params);

// ---------------------------------------------------------------------------
// Space-to-depth

// Splits each scale x scale spatial block into scale^2 sub-maps and stacks
// them along channels. Sub-map (x, y) holds rows x, x+scale, ... and columns
// y, y+scale, ...; sub-maps are ordered with x fastest, so the output channel
// of input channel c in sub-map (x, y) is (x + scale * y) * C + c.
Tensor spd_transform(const Tensor& t, std::size_t scale);

// Exact inverse of spd_transform.
Tensor inverse_spd(const Tensor& t, std::size_t scale);

class SpdParams {
 public:
  // `kernel` must read scale^2 * C1 channels and emit fewer than that.
  SpdParams(std::size_t scale, ConvKernel kernel);

  std::size_t scale() const { return scale_; }
  std::size_t in_channels() const { return kernel_.in_channels() / (scale_ * scale_); }
  std::size_t out_channels() const { return kernel_.out_channels(); }
  const ConvKernel& kernel() const { return kernel_; }

 private:
  std::size_t scale_;
  ConvKernel kernel_;
};

// Space-to-depth followed by a same-padded, stride-1 convolution.
Tensor spd_conv(const Tensor& t, const SpdParams& params);

// ---------------------------------------------------------------------------
// SPPF pyramid with cross-stage-partial wiring
//
//   main:     pre1 (1x1, C->h) -> pre2 (kxk, h->h) -> pre3 (1x1, h->h) = x1
//             p1 = pool(x1), p2 = pool(p1), p3 = pool(p2)
//             post1 (1x1, 4h->h) over [x1, p1, p2, p3] -> post2 (kxk, h->h)
//   shortcut: short (1x1, C->h)
//   fusion:   fuse (1x1, 2h->out) over [main, shortcut]
//
// Every convolution is followed by SiLU unless `activation` is false.

struct SppfcspcParams {
  std::size_t pool_kernel = 5;
  std::size_t hidden_channels = 0;
  ConvKernel pre1, pre2, pre3;
  ConvKernel post1, post2;
  ConvKernel shortcut;
  ConvKernel fuse;
  bool activation = true;

  std::size_t in_channels() const { return pre1.in_channels(); }
  std::size_t out_channels() const { return fuse.out_channels(); }
  void validate() const;
};

// Deterministic pseudo-random weights for the given widths. Passing
// hidden_channels = 0 selects in_channels / 2.
SppfcspcParams make_sppfcspc_params(std::size_t in_channels,
                                    std::size_t out_channels,
                                    std::size_t hidden_channels = 0,
                                    std::size_t pool_kernel = 5,
                                    unsigned seed = 0);

// The four pyramid levels [x, pool(x), pool^2(x), pool^3(x)].
std::array<Tensor, 4> sppf_pyramid(const Tensor& x, std::size_t pool_kernel);

Tensor sppfcspc_forward(const Tensor& t, const SppfcspcParams& params);

}  // namespace barrierfree::kernels
