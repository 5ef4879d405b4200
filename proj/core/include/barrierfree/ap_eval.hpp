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

#include <iosfwd>
#include <string>
#include <vector>

#include "barrierfree/dataset.hpp"
#include "barrierfree/detection.hpp"

namespace barrierfree::eval {

using detection::BoundingBox;

struct GroundTruth {
  std::string image_id;
  int class_index = 0;
  BoundingBox box;
};

struct Prediction {
  std::string image_id;
  int class_index = 0;
  BoundingBox box;
  double confidence = 0.0;
};

struct EvalResult {
  double ap = 0.0;    // mean over IoU 0.50:0.05:0.95
  double ap50 = 0.0;
  double ap75 = 0.0;
  double ap_s = 0.0;  // ground truth area < 96^2 px
  double ap_l = 0.0;  // ground truth area >= 96^2 px
};

inline constexpr double kSmallAreaLimit = 96.0 * 96.0;
inline constexpr int kNumIouThresholds = 10;
inline constexpr int kRecallPoints = 101;

// IoU threshold i = 0.50 + 0.05 i.
double iou_threshold(int i);

// COCO-style average precision.
//
// Per class and IoU threshold, predictions of each image are visited in
// descending confidence (stable, so ties keep input order) and matched to the
// unmatched ground truth of highest IoU at or above the threshold (lowest
// index on IoU ties). Ground truths outside the evaluated size range are
// ignored: matches to them are dropped, and so are unmatched predictions
// whose own area is outside the range. Precision is made monotone and read
// at 101 recall points. Each metric averages the classes that have ground
// truth in range; with none it is 0.
EvalResult evaluate_ap(const std::vector<Prediction>& predictions,
                       const std::vector<GroundTruth>& ground_truth);

// Brute-force reference for evaluate_ap on tiny inputs: enumerates every
// injective prediction-to-ground-truth assignment per image, keeps the one
// that satisfies the greedy matching constraints, and integrates precision by
// direct maxima. Throws DomainError when an image has more than `max_boxes`
// boxes (predictions plus ground truths).
EvalResult ap_oracle(const std::vector<Prediction>& predictions,
                     const std::vector<GroundTruth>& ground_truth,
                     int max_boxes = 6);

std::vector<GroundTruth> ground_truth_from_annotations(
    const std::vector<dataset::AnnotationRecord>& records, double image_width,
    double image_height);

// Line-delimited JSON: {"image_id":..,"class_index":..,"x_min":..,
// "y_min":..,"x_max":..,"y_max":..,"confidence":..}. Throws ParseError.
std::vector<Prediction> read_predictions(std::istream& in,
                                         const std::string& source);
std::vector<Prediction> read_predictions_file(const std::string& path);

// Column order AP, AP50, AP75, AP_S, AP_L.
inline constexpr const char* kEvalCsvHeader = "AP,AP50,AP75,AP_S,AP_L";
std::string eval_csv_row(const EvalResult& r);

}  // namespace barrierfree::eval
