// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "crowdmatch/assignment.hpp"
#include "crowdmatch/geometry.hpp"
#include "crowdmatch/sample.hpp"

namespace crowdmatch {

struct LossConfig {
  double gamma_o = 2.0;  // anchor exponent
  double beta = 0.6;     // shared with CostConfig::beta
  double clamp_low = 0.0;
  double clamp_high = 3.0;
  double gamma_min = 0.05;

  void validate() const;
};

/// Binary focal loss without the alpha weight. `y` must be 0 or 1.
double focal_loss(double p, double y, double gamma);

/// Adaptive exponent:
///   max(gamma_min, gamma_o + clamp(g - t_g, low, high) * (beta - y))
double uafl_gamma(double g, double t_g, double y, const LossConfig& cfg);

/// Soft-label focal loss -|y - p|^gamma * (y log p + (1 - y) log(1 - p)).
/// Zero exactly when p == y.
double uafl_loss(double p, double y, double gamma);

/// dL/dp of uafl_loss in closed form. Returns 0 at p == y, where the loss
/// attains its minimum.
double uafl_grad(double p, double y, double gamma);

/// Per-sample ratio of the gradient a sample would produce as a positive to
/// the gradient it would produce as a negative, plus their running mean.
class GradientRatioTracker {
 public:
  explicit GradientRatioTracker(double eps = 1e-8) : eps_(eps) {}

  /// Stores |grad_as_pos| / (|grad_as_neg| + eps) for `sample_index`,
  /// replacing any earlier value, and refreshes the mean.
  void update(std::size_t sample_index, double grad_as_pos, double grad_as_neg);
  void reset();

  double ratio(std::size_t sample_index) const;
  double threshold() const { return t_g_; }
  std::size_t size() const { return ratios_.size(); }
  const std::map<std::size_t, double>& ratios() const { return ratios_; }

 private:
  double eps_;
  std::map<std::size_t, double> ratios_;
  double t_g_ = 0.0;
};

enum class SampleRole { kPositive, kNegative };

struct SampleLoss {
  std::size_t index = 0;
  SampleRole role = SampleRole::kNegative;
  double score = 0.0;
  double y = 0.0;
  double gamma = 0.0;
  double ratio = 0.0;  // gradient ratio; 0 for negatives
  double loss = 0.0;
  double dloss_dscore = 0.0;
};

struct LossReport {
  std::vector<SampleLoss> samples;  // ascending sample index
  double sum_pos = 0.0;
  double sum_neg = 0.0;
  std::size_t count_filtered = 0;
  double t_g = 0.0;
};

/// Loss over one assignment. Positives use the IoU with their gt as soft
/// label and the adaptive exponent; negatives use y = 0 and gamma_o. The
/// tracker is refreshed from this batch's positives before exponents are
/// computed.
LossReport batch_uafl(const Assignment& assignment,
                      std::span<const Sample> samples, std::span<const BBox> gts,
                      GradientRatioTracker& tracker, const LossConfig& cfg);

}  // namespace crowdmatch
