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

#include <functional>

#include "barrierfree/tensor.hpp"

namespace barrierfree::kernels {

using ScalarFn = std::function<double(const Tensor&)>;

// Central-difference gradient of f at t, one coordinate at a time.
Tensor finite_diff_gradient(const ScalarFn& f, const Tensor& t,
                            double step = 1e-6);

// Scalar convenience: (f(x + h) - f(x - h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x,
                          double step = 1e-6);

// |a - b| / max(|a|, |b|); 0 when both are exactly 0.
double relative_error(double a, double b);

}  // namespace barrierfree::kernels
