// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crowdmatch/geometry.hpp"
#include "crowdmatch/sample.hpp"

namespace crowdmatch {

struct EvalOptions {
  double iou_threshold = 0.5;
  double fppi_low = 1e-2;
  double fppi_high = 1.0;
  std::size_t mr_points = 9;

  void validate() const;
};

/// Detections and ground truths of one image.
struct ImageDetections {
  std::vector<Sample> dets;
  std::vector<BBox> gts;
};

struct DetectionOutcome {
  std::size_t index = 0;  // position in the input detection list
  double score = 0.0;
  bool true_positive = false;
  std::optional<std::size_t> gt;
  double best_iou = 0.0;  // against any gt, claimed or not
};

struct ImageMatch {
  std::vector<DetectionOutcome> outcomes;  // descending score
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Greedy score-ordered matching. Each detection claims the unclaimed gt
/// with the highest IoU at or above the threshold. Equal scores keep input
/// order; equal IoUs prefer the lower gt index.
ImageMatch match_detections(std::span<const Sample> dets,
                            std::span<const BBox> gts,
                            double iou_threshold = 0.5);

struct CurvePoint {
  double score = 0.0;  // threshold: detections with score >= this are kept
  double fppi = 0.0;
  double miss_rate = 1.0;
};

/// One point per distinct score, from the highest threshold down, so fppi is
/// non-decreasing along the curve.
std::vector<CurvePoint> miss_rate_curve(std::span<const ImageMatch> images);

/// Geometric mean of the miss rate sampled at `mr_points` FPPI targets spaced
/// log-uniformly over [fppi_low, fppi_high]. At each target the last curve
/// point with fppi <= target is used, or 1 when there is none.
double log_average_mr(std::span<const CurvePoint> curve, const EvalOptions& opts = {});

inline constexpr std::size_t kIouIntervals = 5;
using FpHistogram = std::array<std::size_t, kIouIntervals>;

/// Bin of [0, 0.2), [0.2, 0.4), [0.4, 0.6), [0.6, 0.8), [0.8, 1.0].
std::size_t iou_interval(double best_iou);

FpHistogram fp_interval_histogram(std::span<const double> fp_best_ious);

struct EvalResult {
  double mr = 1.0;
  std::vector<CurvePoint> curve;
  FpHistogram fp_histogram{};
  std::size_t images = 0;
  std::size_t detections = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Full evaluation with every detection kept at the operating point.
EvalResult evaluate(std::span<const ImageDetections> images,
                    const EvalOptions& opts = {});

/// Number of detections scoring at or above the lowest threshold whose FPPI
/// stays within opts.fppi_high, i.e. the detections the MR computation sees.
std::size_t valid_prediction_count(std::span<const ImageDetections> images,
                                   const EvalOptions& opts = {});

/// Keeps the k highest-scoring detections over the whole set. Ties go to the
/// earlier image, then the earlier detection.
std::vector<ImageDetections> truncate_top_k(std::span<const ImageDetections> images,
                                            std::size_t k);

struct FpComparison {
  std::size_t k = 0;
  FpHistogram first{};
  FpHistogram second{};
};

/// Equal-count false-positive comparison of two detectors on the same images:
/// both are cut to the smaller of their valid prediction counts, then FPs are
/// binned by best IoU.
FpComparison compare_fp_intervals(std::span<const ImageDetections> first,
                                  std::span<const ImageDetections> second,
                                  const EvalOptions& opts = {});

}  // namespace crowdmatch
