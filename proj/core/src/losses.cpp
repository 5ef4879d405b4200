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
#include "barrierfree/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "barrierfree/error.hpp"

namespace barrierfree::kernels {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " +
                      std::to_string(p));
  }
}

void check_label(int y) {
  if (y != 0 && y != 1) {
    throw DomainError("binary label must be 0 or 1, got " + std::to_string(y));
  }
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1e-6)) {
    throw DomainError("log clamp epsilon must lie in (0, 1e-6]");
  }
}

double clamped_log(double x, double eps) { return std::log(std::clamp(x, eps, 1.0)); }

// Probability assigned to the true label.
double target_probability(double p, int y) { return y == 1 ? p : 1.0 - p; }

}  // namespace

void LossParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
  if (!(beta >= 0.0)) throw DomainError("beta must be non-negative");
  check_eps(epsilon);
}

double cross_entropy(double p, int y, double eps) {
  check_probability(p, "probability");
  check_label(y);
  check_eps(eps);
  return -clamped_log(target_probability(p, y), eps);
}

double focal_loss(double p, int y, const LossParams& params) {
  params.validate();
  check_probability(p, "probability");
  check_label(y);
  const double pt = target_probability(p, y);
  const double alpha_t = y == 1 ? params.alpha : 1.0 - params.alpha;
  return alpha_t * std::pow(1.0 - pt, params.gamma) * -clamped_log(pt, params.epsilon);
}

double quality_focal_loss(double sigma, double y, double beta, double eps) {
  check_probability(sigma, "score");
  check_probability(y, "soft target");
  if (!(beta >= 0.0)) throw DomainError("beta must be non-negative");
  check_eps(eps);
  const double bce = y * clamped_log(sigma, eps) + (1.0 - y) * clamped_log(1.0 - sigma, eps);
  return std::pow(std::abs(y - sigma), beta) * -bce;
}

double cross_entropy_grad(double p, int y) {
  check_probability(p, "probability");
  check_label(y);
  if (p <= 0.0 || p >= 1.0) throw DomainError("gradient needs p in (0, 1)");
  const double pt = target_probability(p, y);
  const double sign = y == 1 ? 1.0 : -1.0;
  return -sign / pt;
}

double focal_loss_grad(double p, int y, const LossParams& params) {
  params.validate();
  check_probability(p, "probability");
  check_label(y);
  if (p <= 0.0 || p >= 1.0) throw DomainError("gradient needs p in (0, 1)");
  const double pt = target_probability(p, y);
  const double alpha_t = y == 1 ? params.alpha : 1.0 - params.alpha;
  const double sign = y == 1 ? 1.0 : -1.0;
  const double q = 1.0 - pt;
  const double g = params.gamma;
  const double modulation_term = g == 0.0 ? 0.0 : g * std::pow(q, g - 1.0) * std::log(pt);
  return sign * alpha_t * (modulation_term - std::pow(q, g) / pt);
}

double quality_focal_loss_grad(double sigma, double y, double beta) {
  check_probability(sigma, "score");
  check_probability(y, "soft target");
  if (!(beta >= 0.0)) throw DomainError("beta must be non-negative");
  if (sigma <= 0.0 || sigma >= 1.0) throw DomainError("gradient needs sigma in (0, 1)");
  const double d = sigma - y;
  if (d == 0.0 && beta <= 1.0) {
    throw DomainError("quality focal loss is not differentiable at sigma = y for beta <= 1");
  }
  const double bce = y * std::log(sigma) + (1.0 - y) * std::log(1.0 - sigma);
  const double dbce = y / sigma - (1.0 - y) / (1.0 - sigma);
  const double ad = std::abs(d);
  const double dmod = d == 0.0 || beta == 0.0
                          ? 0.0
                          : beta * std::pow(ad, beta - 1.0) * (d > 0 ? 1.0 : -1.0);
  return -(dmod * bce + std::pow(ad, beta) * dbce);
}

}  // namespace barrierfree::kernels
