// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crowdmatch/assignment.hpp"
#include "crowdmatch/costs.hpp"
#include "crowdmatch/evaluation.hpp"
#include "crowdmatch/scene.hpp"

namespace crowdmatch {

// Stand-in for one round of training: how an assignment would move the
// detector's scores. Positives are raised toward their soft label (IoU with
// the matched gt) and never lowered; negatives decay toward zero.
struct ProxyConfig {
  double step = 0.5;
};

enum class AssignMethod { kCgla, kLegacy };

Assignment assign_image(const SceneImage& image, AssignMethod method,
                        const CostConfig& cfg, const CglaOptions& opts = {});

std::vector<Sample> reweight_scores(std::span<const Sample> samples,
                                    std::span<const BBox> gts,
                                    const Assignment& assignment,
                                    const ProxyConfig& proxy = {});

struct ProxyRun {
  std::vector<ImageDetections> detections;  // reweighted predictions per image
  std::size_t positives = 0;
  std::size_t filtered = 0;
  std::size_t negatives = 0;
};

/// Assigns every image, applies the score proxy and collects the reweighted
/// detections for evaluation.
ProxyRun run_proxy(std::span<const SceneImage> images, AssignMethod method,
                   const CostConfig& cfg, const ProxyConfig& proxy = {},
                   const CglaOptions& opts = {});

struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t positives = 0;
  std::size_t filtered = 0;
  double filtered_rate = 0.0;  // filtered / matched
  double mr = 1.0;
};

/// One row per (alpha, beta), alpha-major.
std::vector<SweepRow> run_sweep(std::span<const SceneImage> images,
                                std::span<const double> alphas,
                                std::span<const double> betas,
                                const CostConfig& base, const ProxyConfig& proxy = {},
                                const EvalOptions& eval = {});

}  // namespace crowdmatch
