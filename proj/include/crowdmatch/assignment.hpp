// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crowdmatch/costs.hpp"
#include "crowdmatch/geometry.hpp"
#include "crowdmatch/hungarian.hpp"
#include "crowdmatch/sample.hpp"

namespace crowdmatch {

struct PositivePair {
  std::size_t gt = 0;
  std::size_t sample = 0;
  PairCosts costs;
};

/// Output of one label assignment.
///
/// Every sample index appears exactly once across `positives` and
/// `negatives`. Samples of `filtered` pairs are listed in `negatives`.
struct Assignment {
  std::vector<PositivePair> positives;  // ordered by gt index
  std::vector<std::size_t> negatives;   // ascending
  std::vector<MatchPair> filtered;      // (gt, sample), ordered by gt index
  double total_cost = 0.0;              // matched cost before filtering
};

struct CglaOptions {
  // Include the constraint terms in the matching cost.
  bool constraint_cost = true;
  // Move matched pairs that violate a constraint into the negatives.
  bool post_filter = true;
};

/// Constraint-guided label assignment: match on the constraint-augmented
/// cost, then demote every matched pair that violates a center or position
/// constraint. Requires |gts| <= |samples|.
Assignment cgla_assign(std::span<const BBox> gts, std::span<const Sample> samples,
                       const CostConfig& cfg, const CglaOptions& opts = {});

/// Plain one-to-one matching on the legacy cost; no pair is filtered.
Assignment legacy_assign(std::span<const BBox> gts,
                         std::span<const Sample> samples, const CostConfig& cfg,
                         std::optional<ImageSize> image);

/// Splits a matching into positives and negatives, demoting matched pairs
/// that are not learnable when `filter` is set.
Assignment split_matching(const CostMatrix& costs,
                          std::span<const MatchPair> matching, bool filter);

}  // namespace crowdmatch
