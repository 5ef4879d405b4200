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
#include "barrierfree/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "barrierfree/error.hpp"

namespace barrierfree::kernels {
namespace {

void check_axis(int axis, const char* op) {
  if (axis < 0 || axis > 2) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) +
                         " is not a dimension of a rank-3 tensor");
  }
}

// Applies f to every element.
template <typename F>
Tensor map(const Tensor& t, F f) {
  std::vector<double> out(t.data().begin(), t.data().end());
  for (double& v : out) v = f(v);
  return Tensor(t.shape(), std::move(out));
}

Tensor activate(const Tensor& t, bool enabled) {
  return enabled ? map(t, silu) : t;
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double silu(double x) { return x * sigmoid(x); }

Tensor zpool(const Tensor& t, int axis) {
  check_axis(axis, "zpool");
  const Shape in = t.shape();
  const std::size_t n = in[axis];
  if (n == 0) throw DimensionError("zpool: empty pooling axis");

  Shape out_shape = in;
  out_shape[axis] = 2;
  Tensor out(out_shape);

  // The two remaining axes, in order.
  int u = axis == 0 ? 1 : 0;
  int v = axis == 2 ? 1 : 2;
  std::array<std::size_t, 3> idx{};
  for (std::size_t i = 0; i < in[u]; ++i) {
    for (std::size_t j = 0; j < in[v]; ++j) {
      idx[u] = i;
      idx[v] = j;
      double mx = -std::numeric_limits<double>::infinity();
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        idx[axis] = k;
        const double x = t.at(idx);
        mx = std::max(mx, x);
        sum += x;
      }
      idx[axis] = 0;
      out.at(idx) = mx;
      idx[axis] = 1;
      out.at(idx) = sum / static_cast<double>(n);
    }
  }
  return out;
}

Tensor rotate_dims(const Tensor& t, int dim_a, int dim_b, Rotation direction) {
  check_axis(dim_a, "rotate_dims");
  check_axis(dim_b, "rotate_dims");
  if (dim_a == dim_b) throw DimensionError("rotate_dims: dimensions must differ");

  const Shape in = t.shape();
  const std::size_t extent_a = in[dim_a];
  const std::size_t extent_b = in[dim_b];
  Shape out_shape = in;
  out_shape[dim_a] = extent_b;
  out_shape[dim_b] = extent_a;
  Tensor out(out_shape);

  std::array<std::size_t, 3> o{};
  std::array<std::size_t, 3> src{};
  for (o[0] = 0; o[0] < out_shape.channels; ++o[0]) {
    for (o[1] = 0; o[1] < out_shape.height; ++o[1]) {
      for (o[2] = 0; o[2] < out_shape.width; ++o[2]) {
        src = o;
        const std::size_t u = o[dim_a];  // in [0, extent_b)
        const std::size_t v = o[dim_b];  // in [0, extent_a)
        if (direction == Rotation::kClockwise) {
          src[dim_a] = extent_a - 1 - v;
          src[dim_b] = u;
        } else {
          src[dim_a] = v;
          src[dim_b] = extent_b - 1 - u;
        }
        out.at(o) = t.at(src);
      }
    }
  }
  return out;
}

ConvKernel::ConvKernel(std::size_t out_channels, std::size_t in_channels,
                       std::size_t kernel_h, std::size_t kernel_w,
                       std::vector<double> weights, std::vector<double> bias)
    : out_(out_channels),
      in_(in_channels),
      kh_(kernel_h),
      kw_(kernel_w),
      weights_(std::move(weights)),
      bias_(std::move(bias)) {
  if (out_ == 0 || in_ == 0 || kh_ == 0 || kw_ == 0) {
    throw DimensionError("ConvKernel: all extents must be positive");
  }
  if (weights_.size() != out_ * in_ * kh_ * kw_) {
    throw DimensionError("ConvKernel: expected " +
                         std::to_string(out_ * in_ * kh_ * kw_) +
                         " weights, got " + std::to_string(weights_.size()));
  }
  if (!bias_.empty() && bias_.size() != out_) {
    throw DimensionError("ConvKernel: bias needs one value per output channel");
  }
}

ConvKernel ConvKernel::identity(std::size_t channels) {
  std::vector<double> w(channels * channels, 0.0);
  for (std::size_t c = 0; c < channels; ++c) w[c * channels + c] = 1.0;
  return ConvKernel(channels, channels, 1, 1, std::move(w));
}

ConvKernel ConvKernel::constant(std::size_t out_channels, std::size_t in_channels,
                                std::size_t kernel_size, double value) {
  return ConvKernel(out_channels, in_channels, kernel_size, kernel_size,
                    std::vector<double>(out_channels * in_channels *
                                            kernel_size * kernel_size,
                                        value));
}

std::size_t ConvKernel::same_padding() const {
  if (kh_ % 2 == 0 || kw_ % 2 == 0 || kh_ != kw_) {
    throw DimensionError("same padding needs a square kernel of odd size");
  }
  return kh_ / 2;
}

Tensor conv2d_unit_stride(const Tensor& t, const ConvKernel& kernel,
                          std::size_t padding) {
  if (kernel.in_channels() != t.channels()) {
    throw DimensionError("conv2d: kernel reads " +
                         std::to_string(kernel.in_channels()) +
                         " channels but the input has " +
                         std::to_string(t.channels()));
  }
  const std::size_t padded_h = t.height() + 2 * padding;
  const std::size_t padded_w = t.width() + 2 * padding;
  if (kernel.kernel_h() > padded_h || kernel.kernel_w() > padded_w) {
    throw DimensionError("conv2d: kernel larger than padded input");
  }
  const std::size_t out_h = padded_h - kernel.kernel_h() + 1;
  const std::size_t out_w = padded_w - kernel.kernel_w() + 1;
  Tensor out({kernel.out_channels(), out_h, out_w});

  const auto pad = static_cast<std::ptrdiff_t>(padding);
  const auto in_h = static_cast<std::ptrdiff_t>(t.height());
  const auto in_w = static_cast<std::ptrdiff_t>(t.width());
  for (std::size_t o = 0; o < kernel.out_channels(); ++o) {
    for (std::size_t y = 0; y < out_h; ++y) {
      for (std::size_t x = 0; x < out_w; ++x) {
        double acc = kernel.bias(o);
        for (std::size_t i = 0; i < kernel.in_channels(); ++i) {
          for (std::size_t ky = 0; ky < kernel.kernel_h(); ++ky) {
            const auto sy = static_cast<std::ptrdiff_t>(y + ky) - pad;
            if (sy < 0 || sy >= in_h) continue;
            for (std::size_t kx = 0; kx < kernel.kernel_w(); ++kx) {
              const auto sx = static_cast<std::ptrdiff_t>(x + kx) - pad;
              if (sx < 0 || sx >= in_w) continue;
              acc += kernel.weight(o, i, ky, kx) *
                     t(i, static_cast<std::size_t>(sy), static_cast<std::size_t>(sx));
            }
          }
        }
        out(o, y, x) = acc;
      }
    }
  }
  return out;
}

Tensor conv2d_same(const Tensor& t, const ConvKernel& kernel) {
  return conv2d_unit_stride(t, kernel, kernel.same_padding());
}

Tensor max_pool2d_same(const Tensor& t, std::size_t kernel_size) {
  if (kernel_size == 0 || kernel_size % 2 == 0) {
    throw DimensionError("max_pool2d_same: kernel size must be odd");
  }
  const auto r = static_cast<std::ptrdiff_t>(kernel_size / 2);
  const auto h = static_cast<std::ptrdiff_t>(t.height());
  const auto w = static_cast<std::ptrdiff_t>(t.width());
  Tensor out(t.shape());
  for (std::size_t c = 0; c < t.channels(); ++c) {
    for (std::ptrdiff_t y = 0; y < h; ++y) {
      for (std::ptrdiff_t x = 0; x < w; ++x) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::ptrdiff_t sy = std::max<std::ptrdiff_t>(0, y - r);
             sy <= std::min(h - 1, y + r); ++sy) {
          for (std::ptrdiff_t sx = std::max<std::ptrdiff_t>(0, x - r);
               sx <= std::min(w - 1, x + r); ++sx) {
            m = std::max(m, t(c, static_cast<std::size_t>(sy),
                              static_cast<std::size_t>(sx)));
          }
        }
        out(c, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = m;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Triplet attention

void TripletParams::validate() const {
  if (kernel_size == 0 || kernel_size % 2 == 0) {
    throw DimensionError("triplet attention: kernel size must be odd, got " +
                         std::to_string(kernel_size));
  }
  for (const auto& k : branch_kernels) {
    if (k.out_channels() != 1 || k.in_channels() != 2 ||
        k.kernel_h() != kernel_size || k.kernel_w() != kernel_size) {
      throw DimensionError(
          "triplet attention: each branch kernel must map 2 -> 1 channels "
          "with a " + std::to_string(kernel_size) + "x" +
          std::to_string(kernel_size) + " window");
    }
  }
}

TripletParams make_triplet_params(std::vector<double> branch0,
                                  std::vector<double> branch1,
                                  std::vector<double> branch2,
                                  std::size_t kernel_size) {
  TripletParams p;
  p.kernel_size = kernel_size;
  p.branch_kernels = {
      ConvKernel(1, 2, kernel_size, kernel_size, std::move(branch0)),
      ConvKernel(1, 2, kernel_size, kernel_size, std::move(branch1)),
      ConvKernel(1, 2, kernel_size, kernel_size, std::move(branch2)),
  };
  p.validate();
  return p;
}

namespace {

// Gates `x` with attention computed from its dim-0 z-pool.
Tensor gate_branch(const Tensor& x, const ConvKernel& kernel, bool bypass) {
  if (bypass) return x;
  const Tensor logits = conv2d_same(zpool(x, 0), kernel);
  Tensor out = x;
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (std::size_t h = 0; h < x.height(); ++h) {
      for (std::size_t w = 0; w < x.width(); ++w) {
        out(c, h, w) = x(c, h, w) * sigmoid(logits(0, h, w));
      }
    }
  }
  return out;
}

}  // namespace

Tensor triplet_attention(const Tensor& t, const TripletParams& params) {
  params.validate();
  const auto& k = params.branch_kernels;
  const bool bypass = params.bypass_gates;

  // Channel/height interaction: rotate the (C, H) plane so H leads.
  Tensor y1 = rotate_dims(
      gate_branch(rotate_dims(t, 0, 1, Rotation::kClockwise), k[0], bypass), 0,
      1, Rotation::kCounterClockwise);
  // Channel/width interaction: rotate the (C, W) plane so W leads.
  Tensor y2 = rotate_dims(
      gate_branch(rotate_dims(t, 0, 2, Rotation::kClockwise), k[1], bypass), 0,
      2, Rotation::kCounterClockwise);
  // Spatial attention on the unrotated input.
  Tensor y3 = gate_branch(t, k[2], bypass);

  // Mean written as y3 + ((y1 - y3) + (y2 - y3)) / 3 so identical branches
  // reproduce the input bit for bit.
  Tensor out(t.shape());
  auto a = y1.data();
  auto b = y2.data();
  auto c = y3.data();
  auto o = out.mutable_data();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = c[i] + ((a[i] - c[i]) + (b[i] - c[i])) / 3.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Space-to-depth

Tensor spd_transform(const Tensor& t, std::size_t scale) {
  if (scale == 0) throw DimensionError("spd_transform: scale must be positive");
  if (t.height() % scale != 0 || t.width() % scale != 0) {
    throw DimensionError("spd_transform: spatial size " + to_string(t.shape()) +
                         " is not divisible by scale " + std::to_string(scale));
  }
  const std::size_t c_in = t.channels();
  const std::size_t h = t.height() / scale;
  const std::size_t w = t.width() / scale;
  Tensor out({scale * scale * c_in, h, w});
  for (std::size_t y = 0; y < scale; ++y) {
    for (std::size_t x = 0; x < scale; ++x) {
      const std::size_t block = x + scale * y;
      for (std::size_t c = 0; c < c_in; ++c) {
        for (std::size_t i = 0; i < h; ++i) {
          for (std::size_t j = 0; j < w; ++j) {
            out(block * c_in + c, i, j) = t(c, i * scale + x, j * scale + y);
          }
        }
      }
    }
  }
  return out;
}

Tensor inverse_spd(const Tensor& t, std::size_t scale) {
  if (scale == 0) throw DimensionError("inverse_spd: scale must be positive");
  const std::size_t blocks = scale * scale;
  if (t.channels() % blocks != 0) {
    throw DimensionError("inverse_spd: " + std::to_string(t.channels()) +
                         " channels are not divisible by scale^2 = " +
                         std::to_string(blocks));
  }
  const std::size_t c_out = t.channels() / blocks;
  Tensor out({c_out, t.height() * scale, t.width() * scale});
  for (std::size_t y = 0; y < scale; ++y) {
    for (std::size_t x = 0; x < scale; ++x) {
      const std::size_t block = x + scale * y;
      for (std::size_t c = 0; c < c_out; ++c) {
        for (std::size_t i = 0; i < t.height(); ++i) {
          for (std::size_t j = 0; j < t.width(); ++j) {
            out(c, i * scale + x, j * scale + y) = t(block * c_out + c, i, j);
          }
        }
      }
    }
  }
  return out;
}

SpdParams::SpdParams(std::size_t scale, ConvKernel kernel)
    : scale_(scale), kernel_(std::move(kernel)) {
  if (scale_ == 0) throw DimensionError("SpdParams: scale must be positive");
  const std::size_t blocks = scale_ * scale_;
  if (kernel_.in_channels() % blocks != 0) {
    throw DimensionError("SpdParams: kernel input channels " +
                         std::to_string(kernel_.in_channels()) +
                         " are not a multiple of scale^2 = " +
                         std::to_string(blocks));
  }
  if (kernel_.out_channels() >= kernel_.in_channels()) {
    throw DomainError("SpdParams: output channels (" +
                      std::to_string(kernel_.out_channels()) +
                      ") must be fewer than scale^2 * C1 (" +
                      std::to_string(kernel_.in_channels()) + ")");
  }
  kernel_.same_padding();  // odd square kernel
}

Tensor spd_conv(const Tensor& t, const SpdParams& params) {
  if (t.channels() != params.in_channels()) {
    throw DimensionError("spd_conv: input has " + std::to_string(t.channels()) +
                         " channels, parameters expect " +
                         std::to_string(params.in_channels()));
  }
  return conv2d_same(spd_transform(t, params.scale()), params.kernel());
}

// ---------------------------------------------------------------------------
// SPPF with CSP wiring

void SppfcspcParams::validate() const {
  const std::size_t h = hidden_channels;
  auto expect = [](const ConvKernel& k, std::size_t in, std::size_t out,
                   bool pointwise, const char* name) {
    if (k.in_channels() != in || k.out_channels() != out) {
      throw DimensionError(std::string("sppfcspc: ") + name + " must map " +
                           std::to_string(in) + " -> " + std::to_string(out) +
                           " channels");
    }
    if (pointwise && (k.kernel_h() != 1 || k.kernel_w() != 1)) {
      throw DimensionError(std::string("sppfcspc: ") + name + " must be 1x1");
    }
    k.same_padding();
  };
  if (h == 0) throw DimensionError("sppfcspc: hidden_channels must be positive");
  if (pool_kernel == 0 || pool_kernel % 2 == 0) {
    throw DimensionError("sppfcspc: pool kernel must be odd");
  }
  expect(pre1, pre1.in_channels(), h, true, "pre1");
  expect(pre2, h, h, false, "pre2");
  expect(pre3, h, h, true, "pre3");
  expect(post1, 4 * h, h, true, "post1");
  expect(post2, h, h, false, "post2");
  expect(shortcut, pre1.in_channels(), h, true, "shortcut");
  expect(fuse, 2 * h, fuse.out_channels(), true, "fuse");
}

SppfcspcParams make_sppfcspc_params(std::size_t in_channels,
                                    std::size_t out_channels,
                                    std::size_t hidden_channels,
                                    std::size_t pool_kernel, unsigned seed) {
  if (in_channels == 0 || out_channels == 0) {
    throw DimensionError("sppfcspc: channel counts must be positive");
  }
  const std::size_t h =
      hidden_channels == 0 ? std::max<std::size_t>(1, in_channels / 2)
                           : hidden_channels;
  std::mt19937 rng(seed);
  auto make = [&](std::size_t out, std::size_t in, std::size_t k) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in * k * k));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> w(out * in * k * k);
    for (double& v : w) v = dist(rng);
    std::vector<double> b(out);
    for (double& v : b) v = dist(rng);
    return ConvKernel(out, in, k, k, std::move(w), std::move(b));
  };
  SppfcspcParams p;
  p.pool_kernel = pool_kernel;
  p.hidden_channels = h;
  p.pre1 = make(h, in_channels, 1);
  p.pre2 = make(h, h, 3);
  p.pre3 = make(h, h, 1);
  p.post1 = make(h, 4 * h, 1);
  p.post2 = make(h, h, 3);
  p.shortcut = make(h, in_channels, 1);
  p.fuse = make(out_channels, 2 * h, 1);
  p.validate();
  return p;
}

std::array<Tensor, 4> sppf_pyramid(const Tensor& x, std::size_t pool_kernel) {
  Tensor p1 = max_pool2d_same(x, pool_kernel);
  Tensor p2 = max_pool2d_same(p1, pool_kernel);
  Tensor p3 = max_pool2d_same(p2, pool_kernel);
  return {x, std::move(p1), std::move(p2), std::move(p3)};
}

Tensor sppfcspc_forward(const Tensor& t, const SppfcspcParams& params) {
  params.validate();
  if (t.channels() != params.in_channels()) {
    throw DimensionError("sppfcspc: input has " + std::to_string(t.channels()) +
                         " channels, parameters expect " +
                         std::to_string(params.in_channels()));
  }
  const bool act = params.activation;
  auto conv = [act](const Tensor& x, const ConvKernel& k) {
    return activate(conv2d_same(x, k), act);
  };

  const Tensor x1 = conv(conv(conv(t, params.pre1), params.pre2), params.pre3);
  const auto pyramid = sppf_pyramid(x1, params.pool_kernel);
  const Tensor main =
      conv(conv(Tensor::concat_channels(pyramid), params.post1), params.post2);
  const Tensor side = conv(t, params.shortcut);
  const std::array<Tensor, 2> both{main, side};
  return conv(Tensor::concat_channels(both), params.fuse);
}

}  // namespace barrierfree::kernels
