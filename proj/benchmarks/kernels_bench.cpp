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
#include <benchmark/benchmark.h>

#include <random>

#include "barrierfree/kernels.hpp"
#include "barrierfree/losses.hpp"

namespace {

using namespace barrierfree::kernels;

Tensor random_tensor(Shape shape, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(shape.size());
  for (auto& x : v) x = u(rng);
  return Tensor(shape, std::move(v));
}

void BM_SpdTransform(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({16, side, side}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(spd_transform(x, 2));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_SpdTransform)->Arg(32)->Arg(64)->Arg(128);

void BM_SpdConv(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({8, side, side}, 2);
  const SpdParams params(2, ConvKernel::constant(16, 32, 3, 0.01));
  for (auto _ : state) benchmark::DoNotOptimize(spd_conv(x, params));
}
BENCHMARK(BM_SpdConv)->Arg(32)->Arg(64);

void BM_TripletAttention(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({16, side, side}, 3);
  std::vector<double> w(2 * 7 * 7, 0.02);
  const auto params = make_triplet_params(w, w, w, 7);
  for (auto _ : state) benchmark::DoNotOptimize(triplet_attention(x, params));
}
BENCHMARK(BM_TripletAttention)->Arg(16)->Arg(32);

void BM_Sppfcspc(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const Tensor x = random_tensor({16, side, side}, 4);
  const auto params = make_sppfcspc_params(16, 16);
  for (auto _ : state) benchmark::DoNotOptimize(sppfcspc_forward(x, params));
}
BENCHMARK(BM_Sppfcspc)->Arg(16)->Arg(32);

void BM_QualityFocalLossGrad(benchmark::State& state) {
  double s = 0.0;
  for (auto _ : state) {
    for (int i = 1; i < 100; ++i) s += quality_focal_loss_grad(i / 100.0, 0.37, 2.0);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_QualityFocalLossGrad);

}  // namespace
