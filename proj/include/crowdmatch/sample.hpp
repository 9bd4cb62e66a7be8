// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <span>
#include <vector>

#include "crowdmatch/geometry.hpp"

namespace crowdmatch {

/// Scores are kept inside [kScoreEps, 1 - kScoreEps] so logs stay finite.
inline constexpr double kScoreEps = 1e-7;

double clamp_score(double score);

/// One detector prediction.
struct Sample {
  BBox box;
  double score = 0.5;
};

/// Returns a copy with every score clamped into the valid range. Non-finite
/// scores are rejected.
std::vector<Sample> ingest_samples(std::span<const Sample> samples);

}  // namespace crowdmatch
