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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "barrierfree/error.hpp"
#include "barrierfree/kernels.hpp"
#include "barrierfree/tensor.hpp"

namespace barrierfree::kernels {
namespace {

Tensor random_tensor(std::mt19937_64& rng, Shape shape) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> data(shape.size());
  for (auto& v : data) v = u(rng);
  return Tensor(shape, std::move(data));
}

std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(n);
  for (auto& v : w) v = u(rng);
  return w;
}

// Direct same-padded cross-correlation of a 2-channel map with one filter.
std::vector<double> naive_gate(const std::vector<double>& map, std::size_t rows,
                               std::size_t cols, const std::vector<double>& w, std::size_t k) {
  const long p = static_cast<long>(k / 2);
  std::vector<double> out(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t ch = 0; ch < 2; ++ch) {
        for (std::size_t di = 0; di < k; ++di) {
          for (std::size_t dj = 0; dj < k; ++dj) {
            const long r = static_cast<long>(i + di) - p;
            const long c = static_cast<long>(j + dj) - p;
            if (r < 0 || c < 0 || r >= static_cast<long>(rows) || c >= static_cast<long>(cols)) {
              continue;
            }
            acc += w[(ch * k + di) * k + dj] *
                   map[(ch * rows + static_cast<std::size_t>(r)) * cols +
                       static_cast<std::size_t>(c)];
          }
        }
      }
      out[i * cols + j] = 1.0 / (1.0 + std::exp(-acc));
    }
  }
  return out;
}

TEST(ZPool, ChannelValuesGiveMaxThenMean) {
  const Tensor t(Shape{3, 1, 1}, {1, 2, 3});
  const Tensor z = zpool(t, Axis::kChannels);
  EXPECT_EQ(z.shape(), (Shape{2, 1, 1}));
  EXPECT_EQ(z(0, 0, 0), 3.0);
  EXPECT_EQ(z(1, 0, 0), 2.0);
}

TEST(ZPool, SymmetricChannelsAverageToZero) {
  const Tensor z = zpool(Tensor(Shape{2, 1, 1}, {-1, 1}), 0);
  EXPECT_EQ(z(0, 0, 0), 1.0);
  EXPECT_EQ(z(1, 0, 0), 0.0);
}

TEST(ZPool, ConstantTensorGivesEqualSlices) {
  const Tensor z = zpool(Tensor(Shape{4, 3, 2}, 2.5), Axis::kHeight);
  EXPECT_EQ(z.shape(), (Shape{4, 2, 2}));
  for (double v : z.data()) EXPECT_EQ(v, 2.5);
}

TEST(ZPool, InvalidAxisThrows) {
  EXPECT_THROW(zpool(Tensor(Shape{1, 1, 1}), 3), DimensionError);
  EXPECT_THROW(zpool(Tensor(Shape{1, 1, 1}), -1), DimensionError);
}

TEST(ZPool, MaxSliceDominatesMeanSlice) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Tensor t = random_tensor(rng, {1 + rng() % 5, 1 + rng() % 6, 1 + rng() % 6});
    for (int axis = 0; axis < 3; ++axis) {
      const Tensor z = zpool(t, axis);
      for (std::size_t i = 0; i < z.size(); ++i) {
        std::array<std::size_t, 3> idx{};
        std::size_t rest = i;
        for (int d = 2; d >= 0; --d) {
          idx[d] = rest % z.shape()[d];
          rest /= z.shape()[d];
        }
        if (idx[axis] != 0) continue;
        auto mean_idx = idx;
        mean_idx[axis] = 1;
        EXPECT_GE(z.at(idx), z.at(mean_idx));
      }
    }
  }
}

TEST(RotateDims, ClockwiseMatchesMatrixRotation) {
  // (C,H) plane [[0,1,2],[3,4,5]] rotated clockwise is [[3,0],[4,1],[5,2]].
  const Tensor t(Shape{2, 3, 1}, {0, 1, 2, 3, 4, 5});
  const Tensor r = rotate_dims(t, 0, 1, Rotation::kClockwise);
  EXPECT_EQ(r, Tensor(Shape{3, 2, 1}, {3, 0, 4, 1, 5, 2}));
}

TEST(RotateDims, InverseRecoversInputAndShapeSwaps) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    const Tensor t = random_tensor(rng, {1 + rng() % 4, 1 + rng() % 5, 1 + rng() % 6});
    for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      const Tensor r = rotate_dims(t, a, b, Rotation::kClockwise);
      EXPECT_EQ(r.shape()[a], t.shape()[b]);
      EXPECT_EQ(r.shape()[b], t.shape()[a]);
      EXPECT_EQ(rotate_dims(r, a, b, Rotation::kCounterClockwise), t);
    }
  }
}

TEST(RotateDims, ChannelHeightPlaneSwapsShape) {
  const Tensor r = rotate_dims(Tensor(Shape{2, 5, 7}), 0, 1, Rotation::kClockwise);
  EXPECT_EQ(r.shape(), (Shape{5, 2, 7}));
}

TEST(RotateDims, SingleElementUnchanged) {
  const Tensor t(Shape{1, 1, 1}, {4.0});
  EXPECT_EQ(rotate_dims(t, 1, 2, Rotation::kClockwise), t);
}

TEST(RotateDims, EqualDimsThrow) {
  EXPECT_THROW(rotate_dims(Tensor(Shape{1, 1, 1}), 1, 1, Rotation::kClockwise), DimensionError);
}

TEST(TripletAttention, BypassIsExactIdentity) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 50; ++n) {
    const Tensor t = random_tensor(rng, {1 + rng() % 6, 1 + rng() % 9, 1 + rng() % 9});
    auto p = make_triplet_params(random_weights(rng, 98), random_weights(rng, 98),
                                 random_weights(rng, 98));
    p.bypass_gates = true;
    EXPECT_EQ(triplet_attention(t, p), t);
  }
}

TEST(TripletAttention, MatchesIndexLevelReference) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 30; ++n) {
    const std::size_t k = n % 2 == 0 ? 3 : 7;
    const std::size_t C = 1 + rng() % 4, H = 1 + rng() % 6, W = 1 + rng() % 6;
    const Tensor x = random_tensor(rng, {C, H, W});
    const auto w1 = random_weights(rng, 2 * k * k);
    const auto w2 = random_weights(rng, 2 * k * k);
    const auto w3 = random_weights(rng, 2 * k * k);
    const Tensor out = triplet_attention(x, make_triplet_params(w1, w2, w3, k));

    // Branch 1 pools over H on the clockwise-rotated (C,H) plane: rows are C
    // reversed, columns W.
    std::vector<double> m1(2 * C * W), m2(2 * H * C), m3(2 * H * W);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t w = 0; w < W; ++w) {
        double mx = -INFINITY, sum = 0.0;
        for (std::size_t h = 0; h < H; ++h) {
          mx = std::max(mx, x(c, h, w));
          sum += x(c, h, w);
        }
        const std::size_t v = C - 1 - c;
        m1[v * W + w] = mx;
        m1[(C + v) * W + w] = sum / static_cast<double>(H);
      }
    }
    // Branch 2 pools over W on the rotated (C,W) plane: rows H, columns C
    // reversed.
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t h = 0; h < H; ++h) {
        double mx = -INFINITY, sum = 0.0;
        for (std::size_t w = 0; w < W; ++w) {
          mx = std::max(mx, x(c, h, w));
          sum += x(c, h, w);
        }
        const std::size_t v = C - 1 - c;
        m2[h * C + v] = mx;
        m2[(H + h) * C + v] = sum / static_cast<double>(W);
      }
    }
    // Branch 3 pools over C.
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t w = 0; w < W; ++w) {
        double mx = -INFINITY, sum = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
          mx = std::max(mx, x(c, h, w));
          sum += x(c, h, w);
        }
        m3[h * W + w] = mx;
        m3[(H + h) * W + w] = sum / static_cast<double>(C);
      }
    }
    const auto g1 = naive_gate(m1, C, W, w1, k);
    const auto g2 = naive_gate(m2, H, C, w2, k);
    const auto g3 = naive_gate(m3, H, W, w3, k);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t w = 0; w < W; ++w) {
          const std::size_t v = C - 1 - c;
          const double expected =
              x(c, h, w) * (g1[v * W + w] + g2[h * C + v] + g3[h * W + w]) / 3.0;
          EXPECT_NEAR(out(c, h, w), expected, 1e-12);
        }
      }
    }
  }
}

TEST(TripletAttention, ShapePreservedAndMagnitudeBounded) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 200; ++n) {
    const Tensor t = random_tensor(rng, {1 + rng() % 6, 1 + rng() % 8, 1 + rng() % 8});
    const auto p = make_triplet_params(random_weights(rng, 18), random_weights(rng, 18),
                                       random_weights(rng, 18), 3);
    const Tensor out = triplet_attention(t, p);
    ASSERT_EQ(out.shape(), t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_LE(std::abs(out.data()[i]), std::abs(t.data()[i]));
    }
  }
}

TEST(TripletAttention, RejectsBadKernels) {
  EXPECT_THROW(make_triplet_params(std::vector<double>(16), std::vector<double>(16),
                                   std::vector<double>(16), 4),
               std::exception);
  EXPECT_THROW(make_triplet_params(std::vector<double>(10), std::vector<double>(18),
                                   std::vector<double>(18), 3),
               DimensionError);
}

TEST(SpaceToDepth, WorkedExampleChannelOrder) {
  const Tensor t(Shape{1, 2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(spd_transform(t, 2), Tensor(Shape{4, 1, 1}, {1, 3, 2, 4}));
}

TEST(SpaceToDepth, ScaleOneIsIdentity) {
  std::mt19937_64 rng(1);
  const Tensor t = random_tensor(rng, {3, 4, 5});
  EXPECT_EQ(spd_transform(t, 1), t);
  EXPECT_EQ(inverse_spd(t, 1), t);
}

TEST(SpaceToDepth, DetectorInputShape) {
  const Tensor out = spd_transform(Tensor(Shape{3, 640, 640}), 2);
  EXPECT_EQ(out.shape(), (Shape{12, 320, 320}));
  EXPECT_EQ(inverse_spd(out, 2).shape(), (Shape{3, 640, 640}));
}

TEST(SpaceToDepth, MatchesSliceDefinition) {
  std::mt19937_64 rng(4);
  for (std::size_t s : {1u, 2u, 3u, 4u}) {
    const Tensor t = random_tensor(rng, {3, 4 * s, 2 * s});
    const Tensor out = spd_transform(t, s);
    for (std::size_t x = 0; x < s; ++x) {
      for (std::size_t y = 0; y < s; ++y) {
        for (std::size_t c = 0; c < 3; ++c) {
          for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
              ASSERT_EQ(out((x + s * y) * 3 + c, i, j), t(c, i * s + x, j * s + y));
            }
          }
        }
      }
    }
  }
}

TEST(SpaceToDepth, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 100; ++n) {
    const std::size_t s = std::array<std::size_t, 3>{1, 2, 4}[n % 3];
    const std::size_t side = s * (1 + rng() % (32 / s));
    const Tensor t = random_tensor(rng, {1 + rng() % 8, side, side});
    const Tensor fwd = spd_transform(t, s);
    EXPECT_EQ(inverse_spd(fwd, s), t);
    auto a = std::vector<double>(t.data().begin(), t.data().end());
    auto b = std::vector<double>(fwd.data().begin(), fwd.data().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(SpaceToDepth, NonDivisibleSizesThrow) {
  EXPECT_THROW(spd_transform(Tensor(Shape{1, 3, 4}), 2), DimensionError);
  EXPECT_THROW(inverse_spd(Tensor(Shape{3, 2, 2}), 2), DimensionError);
  EXPECT_THROW(spd_transform(Tensor(Shape{1, 2, 2}), 0), std::exception);
}

TEST(Conv2d, IdentityKernelCopiesInput) {
  std::mt19937_64 rng(2);
  const Tensor t = random_tensor(rng, {3, 5, 4});
  EXPECT_EQ(conv2d_unit_stride(t, ConvKernel::identity(3), 0), t);
}

TEST(Conv2d, OnesKernelOnOnesCountsTaps) {
  const Tensor out =
      conv2d_unit_stride(Tensor(Shape{1, 5, 5}, 1.0), ConvKernel::constant(1, 1, 3, 1.0), 1);
  ASSERT_EQ(out.shape(), (Shape{1, 5, 5}));
  EXPECT_EQ(out(0, 2, 2), 9.0);
  EXPECT_EQ(out(0, 0, 0), 4.0);
  EXPECT_EQ(out(0, 0, 2), 6.0);
}

TEST(Conv2d, IsCrossCorrelation) {
  // Asymmetric kernel [1, 2, 3] along the width picks left, centre, right.
  const ConvKernel k(1, 1, 1, 3, {1, 2, 3});
  const Tensor out = conv2d_unit_stride(Tensor(Shape{1, 1, 3}, {10, 20, 30}), k, 0);
  EXPECT_EQ(out, Tensor(Shape{1, 1, 1}, {140}));
}

TEST(Conv2d, ChannelMismatchThrows) {
  EXPECT_THROW(conv2d_same(Tensor(Shape{2, 3, 3}), ConvKernel::identity(3)), DimensionError);
}

TEST(Conv2d, FilterCountSetsOutputChannels) {
  const Tensor out = conv2d_same(Tensor(Shape{12, 4, 4}, 1.0), ConvKernel::constant(5, 12, 3, 0.1));
  EXPECT_EQ(out.shape(), (Shape{5, 4, 4}));
}

TEST(Conv2d, SamePaddingPreservesSpatialSize) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 50; ++n) {
    const Tensor t = random_tensor(rng, {1 + rng() % 3, 1 + rng() % 9, 1 + rng() % 9});
    const std::size_t k = 2 * (rng() % 4) + 1;
    const ConvKernel kernel(2, t.channels(), k, k, random_weights(rng, 2 * t.channels() * k * k));
    EXPECT_EQ(conv2d_same(t, kernel).shape(), (Shape{2, t.height(), t.width()}));
    EXPECT_EQ(max_pool2d_same(t, k).shape(), t.shape());
  }
}

TEST(SpdConv, EqualsTransformThenConvolve) {
  std::mt19937_64 rng(13);
  const Tensor t = random_tensor(rng, {3, 8, 8});
  const ConvKernel k(4, 12, 3, 3, random_weights(rng, 4 * 12 * 9));
  const SpdParams p(2, k);
  const Tensor out = spd_conv(t, p);
  EXPECT_EQ(out, conv2d_unit_stride(spd_transform(t, 2), k, 1));
  EXPECT_EQ(out.shape(), (Shape{4, 4, 4}));
}

TEST(SpdConv, RejectsChannelGrowth) {
  EXPECT_THROW(SpdParams(2, ConvKernel::constant(12, 12, 3, 1.0)), DomainError);
  EXPECT_THROW(SpdParams(2, ConvKernel::constant(13, 12, 3, 1.0)), DomainError);
  EXPECT_THROW(SpdParams(2, ConvKernel::constant(4, 10, 3, 1.0)), DimensionError);
}

TEST(Sppfcspc, ConstantInputGivesFiniteOutput) {
  const auto p = make_sppfcspc_params(8, 6, 4, 5, 1);
  const Tensor out = sppfcspc_forward(Tensor(Shape{8, 7, 9}, 0.75), p);
  EXPECT_EQ(out.shape(), (Shape{6, 7, 9}));
  for (double v : out.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Sppfcspc, PyramidOfConstantIsConstant) {
  const Tensor x(Shape{2, 6, 6}, -1.5);
  for (const auto& level : sppf_pyramid(x, 5)) EXPECT_EQ(level, x);
}

TEST(Sppfcspc, ChainedPoolsMatchWiderWindows) {
  std::mt19937_64 rng(14);
  const Tensor x = random_tensor(rng, {3, 17, 15});
  const auto levels = sppf_pyramid(x, 5);
  EXPECT_EQ(levels[0], x);
  EXPECT_EQ(levels[1], max_pool2d_same(x, 5));
  EXPECT_EQ(levels[2], max_pool2d_same(x, 9));
  EXPECT_EQ(levels[3], max_pool2d_same(x, 13));
}

TEST(Sppfcspc, NeckShapeTrace) {
  const auto p = make_sppfcspc_params(64, 64, 32);
  std::mt19937_64 rng(15);
  const Tensor out = sppfcspc_forward(random_tensor(rng, {64, 20, 20}), p);
  EXPECT_EQ(out.shape(), (Shape{64, 20, 20}));
}

TEST(Sppfcspc, DefaultHiddenIsHalfInput) {
  EXPECT_EQ(make_sppfcspc_params(16, 8).hidden_channels, 8u);
}

TEST(TensorType, RejectsBadData) {
  EXPECT_THROW(Tensor(Shape{1, 2, 2}, std::vector<double>{1, 2, 3}), DimensionError);
  EXPECT_THROW(Tensor(Shape{1, 1, 1}, std::vector<double>{NAN}), DomainError);
}

}  // namespace
}  // namespace barrierfree::kernels
