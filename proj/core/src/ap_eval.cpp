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
#include "barrierfree/ap_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "barrierfree/error.hpp"

namespace barrierfree::eval {
namespace {

enum class AreaRange { kAll, kSmall, kLarge };

bool outside(AreaRange range, double area) {
  switch (range) {
    case AreaRange::kAll: return false;
    case AreaRange::kSmall: return area >= kSmallAreaLimit;
    case AreaRange::kLarge: return area < kSmallAreaLimit;
  }
  return false;
}

double area(const BoundingBox& b) { return b.width() * b.height(); }

void check_class(int class_index) {
  if (class_index < 0 || class_index >= detection::kNumClasses) {
    throw DomainError("class index " + std::to_string(class_index) + " out of range");
  }
}

// Outcome of one prediction at one threshold and area range.
enum class Mark { kTruePositive, kFalsePositive, kIgnored };

struct ClassData {
  // Input indices of predictions and ground truths, grouped per image.
  std::map<std::string, std::vector<std::size_t>> preds_by_image;
  std::map<std::string, std::vector<std::size_t>> gts_by_image;
  // All predictions of the class in evaluation order.
  std::vector<std::size_t> pred_order;
};

// Greedy matching for the predictions of one image (already in evaluation
// order). Returns one mark per prediction.
std::vector<Mark> match_image(const std::vector<Prediction>& preds,
                              const std::vector<GroundTruth>& gts,
                              const std::vector<std::size_t>& pred_ids,
                              const std::vector<std::size_t>& gt_ids, double threshold,
                              AreaRange range) {
  const std::size_t m = gt_ids.size();
  std::vector<bool> gt_ignored(m), gt_used(m, false);
  for (std::size_t g = 0; g < m; ++g) gt_ignored[g] = outside(range, area(gts[gt_ids[g]].box));

  std::vector<Mark> marks;
  marks.reserve(pred_ids.size());
  for (std::size_t pid : pred_ids) {
    const auto& box = preds[pid].box;
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    // Non-ignored ground truths first; ignored ones only as a fallback.
    for (int pass = 0; pass < 2 && !best; ++pass) {
      const bool want_ignored = pass == 1;
      for (std::size_t g = 0; g < m; ++g) {
        if (gt_used[g] || gt_ignored[g] != want_ignored) continue;
        const double v = detection::iou(box, gts[gt_ids[g]].box);
        if (v >= threshold && v > best_iou) {
          best = g;
          best_iou = v;
        }
      }
    }
    if (best) {
      gt_used[*best] = true;
      marks.push_back(gt_ignored[*best] ? Mark::kIgnored : Mark::kTruePositive);
    } else {
      marks.push_back(outside(range, area(box)) ? Mark::kIgnored : Mark::kFalsePositive);
    }
  }
  return marks;
}

// 101-point interpolated AP from marks in evaluation order.
double integrate(const std::vector<Mark>& marks, std::int64_t positives) {
  std::vector<double> recall, precision;
  std::int64_t tp = 0, fp = 0;
  for (Mark mark : marks) {
    if (mark == Mark::kIgnored) continue;
    (mark == Mark::kTruePositive ? tp : fp) += 1;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }
  for (std::size_t i = precision.size(); i > 1; --i) {
    precision[i - 2] = std::max(precision[i - 2], precision[i - 1]);
  }
  double sum = 0.0;
  for (int r = 0; r < kRecallPoints; ++r) {
    const double level = static_cast<double>(r) / (kRecallPoints - 1);
    const auto it = std::lower_bound(recall.begin(), recall.end(), level);
    if (it == recall.end()) continue;
    sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / kRecallPoints;
}

// Mean AP over the given thresholds and the classes with in-range ground
// truth, or 0 when there is no such class.
double average_precision(const std::vector<Prediction>& preds,
                         const std::vector<GroundTruth>& gts,
                         const std::array<ClassData, detection::kNumClasses>& classes,
                         const std::vector<int>& thresholds, AreaRange range) {
  double total = 0.0;
  int counted = 0;
  for (const auto& cls : classes) {
    std::int64_t positives = 0;
    for (const auto& [image, ids] : cls.gts_by_image) {
      for (std::size_t g : ids) positives += outside(range, area(gts[g].box)) ? 0 : 1;
    }
    if (positives == 0) continue;
    double class_sum = 0.0;
    for (int ti : thresholds) {
      const double threshold = iou_threshold(ti);
      std::map<std::size_t, Mark> mark_of;
      static const std::vector<std::size_t> kNone;
      for (const auto& [image, pred_ids] : cls.preds_by_image) {
        const auto git = cls.gts_by_image.find(image);
        const auto& gt_ids = git == cls.gts_by_image.end() ? kNone : git->second;
        const auto marks = match_image(preds, gts, pred_ids, gt_ids, threshold, range);
        for (std::size_t k = 0; k < pred_ids.size(); ++k) mark_of[pred_ids[k]] = marks[k];
      }
      std::vector<Mark> ordered;
      ordered.reserve(cls.pred_order.size());
      for (std::size_t pid : cls.pred_order) ordered.push_back(mark_of.at(pid));
      class_sum += integrate(ordered, positives);
    }
    total += class_sum / static_cast<double>(thresholds.size());
    ++counted;
  }
  return counted == 0 ? 0.0 : total / counted;
}

}  // namespace

double iou_threshold(int i) {
  if (i < 0 || i >= kNumIouThresholds) throw DomainError("IoU threshold index out of range");
  return 0.50 + 0.05 * i;
}

EvalResult evaluate_ap(const std::vector<Prediction>& predictions,
                       const std::vector<GroundTruth>& ground_truth) {
  std::array<ClassData, detection::kNumClasses> classes;
  for (std::size_t g = 0; g < ground_truth.size(); ++g) {
    check_class(ground_truth[g].class_index);
    classes[static_cast<std::size_t>(ground_truth[g].class_index)]
        .gts_by_image[ground_truth[g].image_id]
        .push_back(g);
  }
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& p : predictions) {
    check_class(p.class_index);
    if (!std::isfinite(p.confidence)) throw DomainError("prediction confidence must be finite");
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictions[a].confidence > predictions[b].confidence;
  });
  for (std::size_t pid : order) {
    auto& cls = classes[static_cast<std::size_t>(predictions[pid].class_index)];
    cls.pred_order.push_back(pid);
    cls.preds_by_image[predictions[pid].image_id].push_back(pid);
  }

  std::vector<int> all(kNumIouThresholds);
  std::iota(all.begin(), all.end(), 0);
  EvalResult r;
  r.ap = average_precision(predictions, ground_truth, classes, all, AreaRange::kAll);
  r.ap50 = average_precision(predictions, ground_truth, classes, {0}, AreaRange::kAll);
  r.ap75 = average_precision(predictions, ground_truth, classes, {5}, AreaRange::kAll);
  r.ap_s = average_precision(predictions, ground_truth, classes, all, AreaRange::kSmall);
  r.ap_l = average_precision(predictions, ground_truth, classes, all, AreaRange::kLarge);
  return r;
}

std::vector<GroundTruth> ground_truth_from_annotations(
    const std::vector<dataset::AnnotationRecord>& records, double image_width,
    double image_height) {
  std::vector<GroundTruth> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({.image_id = r.image_id,
                   .class_index = r.class_index,
                   .box = r.to_pixels(image_width, image_height)});
  }
  return out;
}

std::vector<Prediction> read_predictions(std::istream& in, const std::string& source) {
  static const std::set<std::string> kFields = {"image_id", "class_index", "x_min", "y_min",
                                                "x_max",    "y_max",       "confidence"};
  std::vector<Prediction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      if (!doc.is_object()) throw ParseError(source, lineno, "expected a JSON object");
      for (const auto& [key, value] : doc.items()) {
        if (!kFields.contains(key)) throw ParseError(source, lineno, "unknown field '" + key + "'");
      }
      for (const auto& key : kFields) {
        if (!doc.contains(key)) throw ParseError(source, lineno, "missing field '" + key + "'");
      }
      if (!doc["image_id"].is_string()) {
        throw ParseError(source, lineno, "image_id must be a string");
      }
      if (!doc["class_index"].is_number_integer()) {
        throw ParseError(source, lineno, "class_index must be an integer");
      }
      for (const char* key : {"x_min", "y_min", "x_max", "y_max", "confidence"}) {
        if (!doc[key].is_number()) {
          throw ParseError(source, lineno, std::string(key) + " must be a number");
        }
      }
      Prediction p{.image_id = doc["image_id"].get<std::string>(),
                   .class_index = doc["class_index"].get<int>(),
                   .box = BoundingBox(doc["x_min"].get<double>(), doc["y_min"].get<double>(),
                                      doc["x_max"].get<double>(), doc["y_max"].get<double>()),
                   .confidence = doc["confidence"].get<double>()};
      if (p.class_index < 0 || p.class_index >= detection::kNumClasses) {
        throw ParseError(source, lineno, "class_index out of range [0, 11]");
      }
      if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
        throw ParseError(source, lineno, "confidence must lie in [0, 1]");
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, lineno, e.what());
    } catch (const GeometryError& e) {
      throw ParseError(source, lineno, e.what());
    } catch (const DomainError& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  return out;
}

std::vector<Prediction> read_predictions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open predictions file");
  return read_predictions(in, path);
}

std::string eval_csv_row(const EvalResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f", r.ap, r.ap50, r.ap75, r.ap_s,
                r.ap_l);
  return buf;
}

}  // namespace barrierfree::eval
