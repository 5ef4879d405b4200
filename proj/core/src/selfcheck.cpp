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
#include "barrierfree/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "barrierfree/gradcheck.hpp"
#include "barrierfree/kernels.hpp"
#include "barrierfree/losses.hpp"
#include "barrierfree/tensor.hpp"

namespace barrierfree::kernels {
namespace {

using Rng = std::mt19937_64;

constexpr double kExact = 0.0;
constexpr double kLossTolerance = 1e-12;
constexpr double kGradTolerance = 1e-4;
constexpr double kGradStep = 1e-6;
// Draws closer than this to the kink of |y - sigma|^beta are skipped.
constexpr double kKinkMargin = 1e-4;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Tensor random_tensor(Rng& rng, Shape shape) {
  std::vector<double> data(shape.size());
  for (auto& v : data) v = uniform(rng, -2.0, 2.0);
  return Tensor(shape, std::move(data));
}

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& v : w) v = uniform(rng, -1.0, 1.0);
  return w;
}

// Tracks the worst observed error against a tolerance.
class Check {
 public:
  Check(std::string name, double tolerance) : result_{std::move(name), true, 0.0, tolerance, 0} {}
  void observe(double error) {
    if (!std::isfinite(error)) error = INFINITY;
    result_.max_error = std::max(result_.max_error, error);
    if (error > result_.tolerance) result_.passed = false;
  }
  void fail() { observe(INFINITY); }
  void count() { ++result_.cases; }
  PropertyResult done() const { return result_; }

 private:
  PropertyResult result_;
};

// Faulty variants for negative controls.
Tensor spd_y_fastest(const Tensor& t, std::size_t scale) {
  const Shape in = t.shape();
  const std::size_t c1 = in.channels, h = in.height / scale, w = in.width / scale;
  Tensor out(Shape{scale * scale * c1, h, w});
  for (std::size_t x = 0; x < scale; ++x) {
    for (std::size_t y = 0; y < scale; ++y) {
      for (std::size_t c = 0; c < c1; ++c) {
        for (std::size_t i = 0; i < h; ++i) {
          for (std::size_t j = 0; j < w; ++j) {
            out((y + scale * x) * c1 + c, i, j) = t(c, i * scale + x, j * scale + y);
          }
        }
      }
    }
  }
  return out;
}

double max_diff_or_inf(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return INFINITY;
  return max_abs_diff(a, b);
}

PropertyResult spd_bijectivity(Rng& rng, int cases, bool fault) {
  Check check("spd-bijectivity", kExact);
  static constexpr std::size_t kScales[] = {1, 2, 4};
  for (int n = 0; n < cases; ++n) {
    const std::size_t scale = kScales[pick(rng, 0, 2)];
    const std::size_t side = scale * pick(rng, 1, 32 / scale);
    const Tensor x = random_tensor(rng, {pick(rng, 1, 8), side, side});
    const Tensor fwd = fault ? spd_y_fastest(x, scale) : spd_transform(x, scale);
    const Tensor back = inverse_spd(fwd, scale);
    auto a = std::vector<double>(x.data().begin(), x.data().end());
    auto b = std::vector<double>(fwd.data().begin(), fwd.data().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    check.observe(max_diff_or_inf(back, x));
    if (a != b) check.fail();
    check.count();
  }
  return check.done();
}

PropertyResult spd_worked_example(bool fault) {
  Check check("spd-worked-example", kExact);
  const Tensor x(Shape{1, 2, 2}, {1, 2, 3, 4});
  const Tensor out = fault ? spd_y_fastest(x, 2) : spd_transform(x, 2);
  const Tensor expected(Shape{4, 1, 1}, {1, 3, 2, 4});
  check.observe(max_diff_or_inf(out, expected));
  check.count();
  return check.done();
}

PropertyResult zpool_dominance(Rng& rng, int cases, bool fault) {
  Check check("zpool-dominance", kExact);
  for (int n = 0; n < cases; ++n) {
    const Tensor x = random_tensor(rng, {pick(rng, 1, 6), pick(rng, 1, 8), pick(rng, 1, 8)});
    const int axis = static_cast<int>(pick(rng, 0, 2));
    const Tensor z = zpool(x, axis);
    const Shape s = z.shape();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size() / 2; ++i) {
      // Index pairs (max, mean) along `axis`.
      std::array<std::size_t, 3> idx{};
      std::size_t rest = i;
      for (int d = 2; d >= 0; --d) {
        if (d == axis) continue;
        idx[static_cast<std::size_t>(d)] = rest % s[d];
        rest /= s[d];
      }
      auto hi = idx, lo = idx;
      hi[static_cast<std::size_t>(axis)] = fault ? 1 : 0;
      lo[static_cast<std::size_t>(axis)] = fault ? 0 : 1;
      worst = std::max(worst, z.at(lo) - z.at(hi));
    }
    check.observe(worst);
    check.count();
  }
  return check.done();
}

TripletParams random_triplet(Rng& rng) {
  const std::size_t k = pick(rng, 0, 1) == 0 ? 3 : 7;
  return make_triplet_params(random_weights(rng, 2 * k * k), random_weights(rng, 2 * k * k),
                             random_weights(rng, 2 * k * k), k);
}

Shape random_small_shape(Rng& rng) { return {pick(rng, 1, 6), pick(rng, 1, 8), pick(rng, 1, 8)}; }

PropertyResult triplet_shape(Rng& rng, int cases, bool fault) {
  Check check("triplet-shape", kExact);
  for (int n = 0; n < cases; ++n) {
    const Tensor x = random_tensor(rng, random_small_shape(rng));
    const Tensor out = triplet_attention(x, random_triplet(rng));
    const Shape expected = fault ? Shape{x.shape().channels + 1, x.shape().height,
                                         x.shape().width}
                                 : x.shape();
    if (out.shape() != expected) check.fail();
    check.count();
  }
  return check.done();
}

PropertyResult triplet_bypass_identity(Rng& rng, int cases, bool fault) {
  Check check("triplet-bypass-identity", kExact);
  for (int n = 0; n < cases; ++n) {
    const Tensor x = random_tensor(rng, random_small_shape(rng));
    auto params = random_triplet(rng);
    params.bypass_gates = !fault;
    check.observe(max_diff_or_inf(triplet_attention(x, params), x));
    check.count();
  }
  return check.done();
}

PropertyResult triplet_magnitude_bound(Rng& rng, int cases, bool fault) {
  Check check("triplet-magnitude-bound", kExact);
  for (int n = 0; n < cases; ++n) {
    const Tensor x = random_tensor(rng, random_small_shape(rng));
    const Tensor out = triplet_attention(x, random_triplet(rng));
    const auto in = x.data();
    const auto o = out.data();
    double worst = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double v = fault ? 2.0 * o[i] : o[i];
      worst = std::max(worst, std::abs(v) - std::abs(in[i]));
    }
    check.observe(worst);
    check.count();
  }
  return check.done();
}

PropertyResult loss_fl_reduces_to_ce(bool fault) {
  Check check("loss-fl-reduces-to-ce", kLossTolerance);
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    for (int y : {0, 1}) {
      const LossParams params{.alpha = y == 1 ? 1.0 : 0.0, .gamma = fault ? 0.5 : 0.0};
      check.observe(std::abs(focal_loss(p, y, params) - cross_entropy(p, y)));
      check.count();
    }
  }
  return check.done();
}

PropertyResult loss_qfl_zero_at_target(Rng& rng, int cases, bool fault) {
  Check check("loss-qfl-zero-at-target", kExact);
  for (int n = 0; n < cases; ++n) {
    const double y = uniform(rng, 0.0, 1.0);
    const double beta = uniform(rng, 0.5, 4.0);
    const double sigma = fault ? std::clamp(y + 0.1, 0.0, 1.0) : y;
    check.observe(std::abs(quality_focal_loss(sigma, y, beta)));
    check.count();
  }
  return check.done();
}

PropertyResult loss_qfl_binary_reduction(Rng& rng, int cases, bool fault) {
  Check check("loss-qfl-binary-reduction", kLossTolerance);
  for (int n = 0; n < cases; ++n) {
    const double sigma = uniform(rng, 0.0, 1.0);
    const double beta = uniform(rng, 0.0, 4.0);
    for (int y : {0, 1}) {
      const LossParams params{.alpha = y == 1 ? 1.0 : 0.0, .gamma = fault ? beta + 1.0 : beta};
      check.observe(std::abs(quality_focal_loss(sigma, y, beta) - focal_loss(sigma, y, params)));
      check.count();
    }
  }
  return check.done();
}

PropertyResult loss_nonnegative(Rng& rng, int cases, bool fault) {
  Check check("loss-nonnegative", kExact);
  for (int n = 0; n < cases; ++n) {
    const double p = uniform(rng, 0.0, 1.0);
    const double y = uniform(rng, 0.0, 1.0);
    const int label = static_cast<int>(pick(rng, 0, 1));
    const LossParams params{.alpha = uniform(rng, 0.0, 1.0), .gamma = uniform(rng, 0.0, 5.0)};
    const double sign = fault ? -1.0 : 1.0;
    const double lowest = std::min({sign * cross_entropy(p, label), sign * focal_loss(p, label, params),
                                    sign * quality_focal_loss(p, y, uniform(rng, 0.0, 4.0))});
    check.observe(std::max(0.0, -lowest));
    check.count();
  }
  return check.done();
}

PropertyResult gradient_check(const std::string& name, Rng& rng, int cases, bool fault,
                              const std::function<std::pair<std::function<double(double)>, double>(
                                  Rng&, double&)>& draw) {
  Check check(name, kGradTolerance);
  for (int n = 0; n < cases; ++n) {
    double x = 0.0;
    auto [f, analytic] = draw(rng, x);
    if (!f) continue;
    if (fault) analytic *= 1.01;
    check.observe(relative_error(analytic, central_difference(f, x, kGradStep)));
    check.count();
  }
  return check.done();
}

PropertyResult grad_ce(Rng& rng, int cases, bool fault) {
  return gradient_check("grad-ce", rng, cases, fault, [](Rng& r, double& x) {
    x = uniform(r, 0.05, 0.95);
    const int y = static_cast<int>(pick(r, 0, 1));
    return std::pair<std::function<double(double)>, double>(
        [y](double p) { return cross_entropy(p, y); }, cross_entropy_grad(x, y));
  });
}

PropertyResult grad_fl(Rng& rng, int cases, bool fault) {
  return gradient_check("grad-fl", rng, cases, fault, [](Rng& r, double& x) {
    x = uniform(r, 0.05, 0.95);
    const int y = static_cast<int>(pick(r, 0, 1));
    const LossParams params{.alpha = uniform(r, 0.0, 1.0), .gamma = uniform(r, 0.0, 5.0)};
    return std::pair<std::function<double(double)>, double>(
        [y, params](double p) { return focal_loss(p, y, params); },
        focal_loss_grad(x, y, params));
  });
}

PropertyResult grad_qfl(Rng& rng, int cases, bool fault) {
  return gradient_check("grad-qfl", rng, cases, fault, [](Rng& r, double& x) {
    x = uniform(r, 0.05, 0.95);
    const double y = uniform(r, 0.0, 1.0);
    const double beta = uniform(r, 1.0, 4.0);
    if (std::abs(x - y) < kKinkMargin) {
      return std::pair<std::function<double(double)>, double>({}, 0.0);
    }
    return std::pair<std::function<double(double)>, double>(
        [y, beta](double s) { return quality_focal_loss(s, y, beta); },
        quality_focal_loss_grad(x, y, beta));
  });
}

PropertyResult conv_same_padding(Rng& rng, int cases, bool fault) {
  Check check("conv-same-padding", kExact);
  for (int n = 0; n < cases; ++n) {
    const Tensor x = random_tensor(rng, random_small_shape(rng));
    const std::size_t k = 2 * pick(rng, 0, 3) + 1;
    const std::size_t out_c = pick(rng, 1, 4);
    const ConvKernel kernel(out_c, x.shape().channels, k, k,
                            random_weights(rng, out_c * x.shape().channels * k * k));
    const Tensor y = fault ? conv2d_unit_stride(x, kernel, 0) : conv2d_same(x, kernel);
    const Tensor p = max_pool2d_same(x, k);
    if (y.shape() != Shape{out_c, x.shape().height, x.shape().width}) check.fail();
    if (p.shape() != x.shape()) check.fail();
    check.count();
  }
  return check.done();
}

}  // namespace

std::vector<std::string> selfcheck_property_names() {
  return {"spd-bijectivity",         "spd-worked-example",      "zpool-dominance",
          "triplet-shape",           "triplet-bypass-identity", "triplet-magnitude-bound",
          "loss-fl-reduces-to-ce",   "loss-qfl-zero-at-target", "loss-qfl-binary-reduction",
          "loss-nonnegative",        "grad-ce",                 "grad-fl",
          "grad-qfl",                "conv-same-padding"};
}

std::vector<PropertyResult> run_selfcheck(const SelfCheckOptions& options) {
  if (options.cases < 1) throw std::invalid_argument("selfcheck needs at least one case");
  const auto names = selfcheck_property_names();
  if (!options.inject_fault.empty() &&
      std::find(names.begin(), names.end(), options.inject_fault) == names.end()) {
    throw std::invalid_argument("unknown property '" + options.inject_fault + "'");
  }
  const int n = options.cases;
  std::vector<PropertyResult> out;
  std::uint64_t stream = 0;
  for (const auto& name : names) {
    // Independent generator per property so results do not depend on order.
    Rng rng(options.seed ^ (0x9e3779b97f4a7c15ULL * ++stream));
    const bool fault = name == options.inject_fault;
    auto run = [&]() -> PropertyResult {
      if (name == "spd-bijectivity") return spd_bijectivity(rng, n, fault);
      if (name == "spd-worked-example") return spd_worked_example(fault);
      if (name == "zpool-dominance") return zpool_dominance(rng, n, fault);
      if (name == "triplet-shape") return triplet_shape(rng, n, fault);
      if (name == "triplet-bypass-identity") return triplet_bypass_identity(rng, n, fault);
      if (name == "triplet-magnitude-bound") return triplet_magnitude_bound(rng, n, fault);
      if (name == "loss-fl-reduces-to-ce") return loss_fl_reduces_to_ce(fault);
      if (name == "loss-qfl-zero-at-target") return loss_qfl_zero_at_target(rng, n, fault);
      if (name == "loss-qfl-binary-reduction") return loss_qfl_binary_reduction(rng, n, fault);
      if (name == "loss-nonnegative") return loss_nonnegative(rng, n, fault);
      if (name == "grad-ce") return grad_ce(rng, n, fault);
      if (name == "grad-fl") return grad_fl(rng, n, fault);
      if (name == "grad-qfl") return grad_qfl(rng, n, fault);
      return conv_same_padding(rng, n, fault);
    };
    try {
      out.push_back(run());
    } catch (const std::exception&) {
      // A kernel that throws on valid input fails its property.
      Check broken(name, 0.0);
      broken.fail();
      out.push_back(broken.done());
    }
  }
  return out;
}

}  // namespace barrierfree::kernels
