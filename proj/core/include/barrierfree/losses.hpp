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

namespace barrierfree::kernels {

inline constexpr double kLogClamp = 1e-12;

struct LossParams {
  double alpha = 0.25;
  double gamma = 2.0;
  double beta = 2.0;
  double epsilon = kLogClamp;

  // alpha in [0,1], gamma and beta >= 0, 0 < epsilon <= 1e-6.
  void validate() const;
};

// All losses take a probability and clamp log arguments into [eps, 1].
// Out-of-range probabilities or labels throw DomainError.

double cross_entropy(double p, int y, double eps = kLogClamp);
double focal_loss(double p, int y, const LossParams& params);
// sigma: predicted score, y: soft (IoU) target, both in [0,1].
double quality_focal_loss(double sigma, double y, double beta,
                          double eps = kLogClamp);

// Analytic derivatives with respect to p (or sigma). Defined on the open
// interval (0,1); quality_focal_loss_grad additionally needs sigma != y when
// beta < 1.
double cross_entropy_grad(double p, int y);
double focal_loss_grad(double p, int y, const LossParams& params);
double quality_focal_loss_grad(double sigma, double y, double beta);

}  // namespace barrierfree::kernels
