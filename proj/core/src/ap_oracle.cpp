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
#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "barrierfree/ap_eval.hpp"
#include "barrierfree/error.hpp"

namespace barrierfree::eval {
namespace {

struct Range {
  double lo, hi;  // [lo, hi)
  bool contains(double a) const { return a >= lo && a < hi; }
};

constexpr double kInf = 1e300;

struct ImageBoxes {
  std::vector<std::size_t> preds;  // evaluation order
  std::vector<std::size_t> gts;    // input order
};

// Does `assign` reproduce greedy matching? -1 means unmatched.
bool greedy_consistent(const std::vector<int>& assign, const std::vector<std::vector<double>>& ov,
                       const std::vector<bool>& ignored, double threshold) {
  const std::size_t m = ignored.size();
  std::vector<bool> used(m, false);
  auto better = [&](std::size_t k, std::size_t g, std::size_t h) {
    if (ignored[g] != ignored[h]) return !ignored[g];
    if (ov[k][g] != ov[k][h]) return ov[k][g] > ov[k][h];
    return g < h;
  };
  for (std::size_t k = 0; k < assign.size(); ++k) {
    auto eligible = [&](std::size_t g) { return !used[g] && ov[k][g] >= threshold; };
    if (assign[k] < 0) {
      for (std::size_t g = 0; g < m; ++g) {
        if (eligible(g)) return false;
      }
      continue;
    }
    const auto chosen = static_cast<std::size_t>(assign[k]);
    if (!eligible(chosen)) return false;
    for (std::size_t g = 0; g < m; ++g) {
      if (g != chosen && eligible(g) && better(k, g, chosen)) return false;
    }
    used[chosen] = true;
  }
  return true;
}

// Enumerates every injective partial assignment and returns the unique one
// consistent with greedy matching.
std::vector<int> unique_assignment(const std::vector<std::vector<double>>& ov,
                                   const std::vector<bool>& ignored, double threshold) {
  const std::size_t k = ov.size();
  const int m = static_cast<int>(ignored.size());
  std::vector<int> assign(k, -1), found;
  std::vector<bool> taken(ignored.size(), false);
  int solutions = 0;
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      if (greedy_consistent(assign, ov, ignored, threshold)) {
        ++solutions;
        found = assign;
      }
      return;
    }
    assign[i] = -1;
    self(self, i + 1);
    for (int g = 0; g < m; ++g) {
      if (taken[static_cast<std::size_t>(g)]) continue;
      taken[static_cast<std::size_t>(g)] = true;
      assign[i] = g;
      self(self, i + 1);
      taken[static_cast<std::size_t>(g)] = false;
    }
    assign[i] = -1;
  };
  recurse(recurse, 0);
  if (solutions != 1) throw std::logic_error("greedy matching is not unique");
  return found;
}

double class_ap(const std::vector<Prediction>& preds, const std::vector<GroundTruth>& gts,
                const std::vector<std::size_t>& order, const std::map<std::string, ImageBoxes>& images,
                double threshold, Range range, std::int64_t positives) {
  // 1 = true positive, 0 = false positive, -1 = ignored.
  std::map<std::size_t, int> outcome;
  for (const auto& [id, boxes] : images) {
    std::vector<std::vector<double>> ov(boxes.preds.size(),
                                        std::vector<double>(boxes.gts.size()));
    std::vector<bool> ignored(boxes.gts.size());
    for (std::size_t g = 0; g < boxes.gts.size(); ++g) {
      ignored[g] = !range.contains(gts[boxes.gts[g]].box.area());
    }
    for (std::size_t k = 0; k < boxes.preds.size(); ++k) {
      for (std::size_t g = 0; g < boxes.gts.size(); ++g) {
        ov[k][g] = detection::iou(preds[boxes.preds[k]].box, gts[boxes.gts[g]].box);
      }
    }
    const auto assign = unique_assignment(ov, ignored, threshold);
    for (std::size_t k = 0; k < assign.size(); ++k) {
      const std::size_t pid = boxes.preds[k];
      if (assign[k] >= 0) {
        outcome[pid] = ignored[static_cast<std::size_t>(assign[k])] ? -1 : 1;
      } else {
        outcome[pid] = range.contains(preds[pid].box.area()) ? 0 : -1;
      }
    }
  }

  std::vector<double> recall, precision;
  std::int64_t tp = 0, seen = 0;
  for (std::size_t pid : order) {
    const int o = outcome.at(pid);
    if (o < 0) continue;
    ++seen;
    tp += o;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(seen));
  }
  double sum = 0.0;
  for (int r = 0; r < kRecallPoints; ++r) {
    const double level = static_cast<double>(r) / 100.0;
    double best = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
      if (recall[i] >= level) best = std::max(best, precision[i]);
    }
    sum += best;
  }
  return sum / kRecallPoints;
}

double metric(const std::vector<Prediction>& preds, const std::vector<GroundTruth>& gts,
              const std::vector<std::size_t>& order, int first_threshold, int num_thresholds,
              Range range) {
  double total = 0.0;
  int classes = 0;
  for (int c = 0; c < detection::kNumClasses; ++c) {
    std::int64_t positives = 0;
    std::map<std::string, ImageBoxes> images;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].class_index != c) continue;
      images[gts[g].image_id].gts.push_back(g);
      positives += range.contains(gts[g].box.area()) ? 1 : 0;
    }
    if (positives == 0) continue;
    std::vector<std::size_t> class_order;
    for (std::size_t pid : order) {
      if (preds[pid].class_index != c) continue;
      class_order.push_back(pid);
      images[preds[pid].image_id].preds.push_back(pid);
    }
    double sum = 0.0;
    for (int t = first_threshold; t < first_threshold + num_thresholds; ++t) {
      sum += class_ap(preds, gts, class_order, images, iou_threshold(t), range, positives);
    }
    total += sum / static_cast<double>(num_thresholds);
    ++classes;
  }
  return classes == 0 ? 0.0 : total / classes;
}

}  // namespace

EvalResult ap_oracle(const std::vector<Prediction>& predictions,
                     const std::vector<GroundTruth>& ground_truth, int max_boxes) {
  std::map<std::string, int> per_image;
  for (const auto& p : predictions) {
    if (p.class_index < 0 || p.class_index >= detection::kNumClasses) {
      throw DomainError("class index out of range");
    }
    ++per_image[p.image_id];
  }
  for (const auto& g : ground_truth) {
    if (g.class_index < 0 || g.class_index >= detection::kNumClasses) {
      throw DomainError("class index out of range");
    }
    ++per_image[g.image_id];
  }
  for (const auto& [id, n] : per_image) {
    if (n > max_boxes) {
      throw DomainError("image '" + id + "' has " + std::to_string(n) +
                        " boxes; the oracle accepts at most " + std::to_string(max_boxes));
    }
  }

  // Descending confidence, input order on ties.
  std::vector<std::size_t> order(predictions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (predictions[a].confidence != predictions[b].confidence) {
      return predictions[a].confidence > predictions[b].confidence;
    }
    return a < b;
  });

  const Range all{0.0, kInf}, small{0.0, kSmallAreaLimit}, large{kSmallAreaLimit, kInf};
  EvalResult r;
  r.ap = metric(predictions, ground_truth, order, 0, kNumIouThresholds, all);
  r.ap50 = metric(predictions, ground_truth, order, 0, 1, all);
  r.ap75 = metric(predictions, ground_truth, order, 5, 1, all);
  r.ap_s = metric(predictions, ground_truth, order, 0, kNumIouThresholds, small);
  r.ap_l = metric(predictions, ground_truth, order, 0, kNumIouThresholds, large);
  return r;
}

}  // namespace barrierfree::eval
