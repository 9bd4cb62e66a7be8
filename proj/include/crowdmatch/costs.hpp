// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crowdmatch/geometry.hpp"
#include "crowdmatch/matrix.hpp"
#include "crowdmatch/sample.hpp"

namespace crowdmatch {

/// Matching-cost parameters.
struct CostConfig {
  double alpha = 0.3;   // center constraint: allowed offset as a fraction of gt size
  double beta = 0.6;    // position constraint: IoU must exceed this
  double lambda1 = 2.0;
  double lambda2 = 2.0;
  double focal_alpha = 0.25;
  double focal_gamma = 2.0;
  // When false the constraint terms are still computed and flagged but do not
  // enter `total`.
  bool constraint_cost = true;

  /// Throws kConfig when an invariant is violated.
  void validate() const;
};

struct ImageSize {
  double width = 0.0;
  double height = 0.0;
};

/// Cost terms for one (gt, sample) pair.
struct PairCosts {
  double c_cls = 0.0;
  double c_giou = 0.0;
  double c_cenx = 0.0;
  double c_ceny = 0.0;
  double c_pos = 0.0;
  double c_l1 = 0.0;  // legacy matrix only
  double total = 0.0;
  bool learnable = true;
};

/// |gts| x |samples| matrix of pair costs. Rows are ground truths.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t gts, std::size_t samples)
      : rows_(gts), cols_(samples), cells_(gts * samples) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  PairCosts& at(std::size_t gt, std::size_t sample) {
    return cells_[gt * cols_ + sample];
  }
  const PairCosts& at(std::size_t gt, std::size_t sample) const {
    return cells_[gt * cols_ + sample];
  }

  Matrix totals() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<PairCosts> cells_;
};

/// Focal-style classification matching cost; strictly decreasing in score.
double cls_cost(double score, const CostConfig& cfg);

/// -1 when the center offset along x exceeds alpha * gt width, else 0.
double cenx_cost(const BBox& sample, const BBox& gt, double alpha);
double ceny_cost(const BBox& sample, const BBox& gt, double alpha);

/// -1 when IoU(sample, gt) <= beta, else 0.
double pos_cost(const BBox& sample, const BBox& gt, double beta);

/// Single pair under the constraint-augmented cost.
PairCosts pair_costs(const BBox& gt, const Sample& sample, const CostConfig& cfg);

/// Constraint-augmented cost:
///   total = lambda1 * c_cls - lambda2 * (c_giou + c_pos + c_cenx + c_ceny)
CostMatrix build_cost_matrix(std::span<const BBox> gts,
                             std::span<const Sample> samples,
                             const CostConfig& cfg);

/// Legacy DETR cost, the ablation baseline:
///   total = lambda1 * (c_cls + c_l1) - lambda2 * c_giou
/// c_l1 is the mean absolute difference of (cx, cy, w, h). With `image` set,
/// x terms are divided by its width and y terms by its height; without it
/// the distance is in raw pixels.
CostMatrix build_legacy_cost_matrix(std::span<const BBox> gts,
                                    std::span<const Sample> samples,
                                    const CostConfig& cfg,
                                    std::optional<ImageSize> image);

}  // namespace crowdmatch
