// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/assignment.hpp"

#include <sstream>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

namespace {

void check_counts(std::size_t gts, std::size_t samples) {
  if (gts > samples) {
    std::ostringstream os;
    os << gts << " ground truths but only " << samples << " samples";
    throw Error(ErrorKind::kShapeMismatch, os.str());
  }
}

}  // namespace

Assignment split_matching(const CostMatrix& costs,
                          std::span<const MatchPair> matching, bool filter) {
  Assignment out;
  std::vector<char> positive(costs.cols(), 0);
  for (const auto& m : matching) {
    const PairCosts& pc = costs.at(m.row, m.col);
    out.total_cost += pc.total;
    if (filter && !pc.learnable) {
      out.filtered.push_back({m.row, m.col});
    } else {
      out.positives.push_back({m.row, m.col, pc});
      positive[m.col] = 1;
    }
  }
  for (std::size_t s = 0; s < costs.cols(); ++s) {
    if (!positive[s]) out.negatives.push_back(s);
  }
  return out;
}

Assignment cgla_assign(std::span<const BBox> gts, std::span<const Sample> samples,
                       const CostConfig& cfg, const CglaOptions& opts) {
  check_counts(gts.size(), samples.size());
  CostConfig matching_cfg = cfg;
  matching_cfg.constraint_cost = opts.constraint_cost;
  const CostMatrix costs = build_cost_matrix(gts, samples, matching_cfg);
  const auto matching = hungarian_solve(costs);
  return split_matching(costs, matching, opts.post_filter);
}

Assignment legacy_assign(std::span<const BBox> gts,
                         std::span<const Sample> samples, const CostConfig& cfg,
                         std::optional<ImageSize> image) {
  check_counts(gts.size(), samples.size());
  const CostMatrix costs = build_legacy_cost_matrix(gts, samples, cfg, image);
  return split_matching(costs, hungarian_solve(costs), false);
}

}  // namespace crowdmatch
