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
#include "barrierfree/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "barrierfree/error.hpp"

namespace barrierfree::kernels {

Tensor finite_diff_gradient(const ScalarFn& f, const Tensor& t, double step) {
  if (!(step > 0.0)) throw DomainError("finite difference step must be positive");
  Tensor grad(t.shape());
  Tensor probe = t;
  auto x = probe.mutable_data();
  auto g = grad.mutable_data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f(probe);
    x[i] = saved - step;
    const double down = f(probe);
    x[i] = saved;
    g[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

double central_difference(const std::function<double(double)>& f, double x,
                          double step) {
  if (!(step > 0.0)) throw DomainError("finite difference step must be positive");
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace barrierfree::kernels
