// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crowdmatch/geometry.hpp"
#include "crowdmatch/sample.hpp"

namespace crowdmatch {

/// Simulated detector behavior.
struct PredictionModel {
  double hit_prob = 0.9;
  // Ground truths overlapping a neighbor above occluded_iou are hit with
  // occluded_hit_prob instead.
  double occluded_iou = 0.5;
  double occluded_hit_prob = 0.4;
  double center_jitter = 0.1;  // sigma, fraction of gt width / height
  double scale_jitter = 0.1;   // sigma of the log size factor
  double score_noise = 0.05;
  std::size_t clutter = 20;
  double clutter_max_iou = 0.5;
  double clutter_score_low = 0.3;
  double clutter_score_high = 0.7;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  double image_w = 1280.0;
  double image_h = 720.0;
  std::size_t n_pedestrians = 22;
  double target_pair_iou_rate = 9.0;  // expected pairs with IoU > pair_iou
  double pair_iou = 0.3;
  double aspect_ratio = 0.41;         // width / height
  double height_median = 160.0;
  double height_log_sigma = 0.35;
  double min_height = 40.0;
  std::size_t max_box_attempts = 2000;
  PredictionModel prediction;

  void validate() const;
};

struct SceneStats {
  std::size_t pairs_over = 0;  // gt pairs with IoU > pair_iou
  double max_pair_iou = 0.0;
  std::size_t attempts = 0;
};

struct Scene {
  std::vector<BBox> gts;
  SceneStats stats;
};

/// Counts unordered pairs with IoU strictly above `threshold`.
std::size_t count_pairs_over(std::span<const BBox> boxes, double threshold);

/// Places pedestrians one at a time, attaching new ones to existing boxes
/// while the overlap count trails the target and rejecting candidates that
/// would overshoot it. Throws kGeneration when a box cannot be placed within
/// max_box_attempts tries.
Scene gen_scene(const SceneSpec& spec);

/// Simulated predictions for `gts`: jittered hits whose score tracks the
/// realized IoU, and clutter boxes. Clutter is topped up so there are never
/// fewer predictions than ground truths. Deterministic in spec.seed.
std::vector<Sample> gen_predictions(std::span<const BBox> gts, const SceneSpec& spec);

}  // namespace crowdmatch
