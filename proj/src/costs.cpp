// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/costs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

double clamp_score(double score) {
  if (!std::isfinite(score)) {
    throw Error(ErrorKind::kInputDomain, "non-finite score");
  }
  return std::clamp(score, kScoreEps, 1.0 - kScoreEps);
}

std::vector<Sample> ingest_samples(std::span<const Sample> samples) {
  std::vector<Sample> out(samples.begin(), samples.end());
  for (auto& s : out) s.score = clamp_score(s.score);
  return out;
}

void CostConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfig, msg); };
  if (!(alpha > 0.0)) fail("alpha must be positive");
  // beta = 0 is kept legal so the ablation grid can start at zero.
  if (!(beta >= 0.0 && beta < 1.0)) fail("beta must lie in [0, 1)");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) ||
      !std::isfinite(lambda2)) {
    fail("lambda1 and lambda2 must be finite and non-negative");
  }
  if (!(lambda1 + lambda2 > 0.0)) fail("lambda1 + lambda2 must be positive");
  if (!(focal_alpha >= 0.0 && focal_alpha <= 1.0)) {
    fail("focal_alpha must lie in [0, 1]");
  }
  if (!(focal_gamma >= 0.0) || !std::isfinite(focal_gamma)) {
    fail("focal_gamma must be finite and non-negative");
  }
}

Matrix CostMatrix::totals() const {
  Matrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = at(r, c).total;
  }
  return m;
}

double cls_cost(double score, const CostConfig& cfg) {
  if (!(score > 0.0 && score < 1.0)) {
    throw Error(ErrorKind::kInputDomain, "score must lie in (0, 1)");
  }
  const double pos = cfg.focal_alpha * std::pow(1.0 - score, cfg.focal_gamma) *
                     -std::log(score);
  const double neg = (1.0 - cfg.focal_alpha) * std::pow(score, cfg.focal_gamma) *
                     -std::log1p(-score);
  return pos - neg;
}

double cenx_cost(const BBox& sample, const BBox& gt, double alpha) {
  if (!(gt.width() > 0.0)) {
    throw Error(ErrorKind::kDegenerateGeometry, "ground truth has zero width");
  }
  return std::abs(sample.cx() - gt.cx()) > alpha * gt.width() ? -1.0 : 0.0;
}

double ceny_cost(const BBox& sample, const BBox& gt, double alpha) {
  if (!(gt.height() > 0.0)) {
    throw Error(ErrorKind::kDegenerateGeometry, "ground truth has zero height");
  }
  return std::abs(sample.cy() - gt.cy()) > alpha * gt.height() ? -1.0 : 0.0;
}

double pos_cost(const BBox& sample, const BBox& gt, double beta) {
  return iou(sample, gt) <= beta ? -1.0 : 0.0;
}

PairCosts pair_costs(const BBox& gt, const Sample& sample, const CostConfig& cfg) {
  PairCosts pc;
  pc.c_cls = cls_cost(sample.score, cfg);
  pc.c_giou = giou(sample.box, gt);
  pc.c_cenx = cenx_cost(sample.box, gt, cfg.alpha);
  pc.c_ceny = ceny_cost(sample.box, gt, cfg.alpha);
  pc.c_pos = pos_cost(sample.box, gt, cfg.beta);
  pc.learnable = pc.c_cenx == 0.0 && pc.c_ceny == 0.0 && pc.c_pos == 0.0;
  const double constraints =
      cfg.constraint_cost ? pc.c_pos + pc.c_cenx + pc.c_ceny : 0.0;
  pc.total = cfg.lambda1 * pc.c_cls - cfg.lambda2 * (pc.c_giou + constraints);
  return pc;
}

namespace {

void check_inputs(std::span<const Sample> samples, const CostConfig& cfg) {
  cfg.validate();
  if (samples.empty()) {
    throw Error(ErrorKind::kEmptyInput, "no samples to assign");
  }
}

[[noreturn]] void rethrow_for_pair(const Error& e, std::size_t gt,
                                   std::size_t sample) {
  std::ostringstream os;
  os << "pair (gt " << gt << ", sample " << sample << "): " << e.what();
  throw Error(e.kind(), os.str());
}

}  // namespace

CostMatrix build_cost_matrix(std::span<const BBox> gts,
                             std::span<const Sample> samples,
                             const CostConfig& cfg) {
  check_inputs(samples, cfg);
  CostMatrix m(gts.size(), samples.size());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    for (std::size_t s = 0; s < samples.size(); ++s) {
      try {
        m.at(g, s) = pair_costs(gts[g], samples[s], cfg);
      } catch (const Error& e) {
        rethrow_for_pair(e, g, s);
      }
    }
  }
  return m;
}

CostMatrix build_legacy_cost_matrix(std::span<const BBox> gts,
                                    std::span<const Sample> samples,
                                    const CostConfig& cfg,
                                    std::optional<ImageSize> image) {
  check_inputs(samples, cfg);
  double sx = 1.0;
  double sy = 1.0;
  if (image) {
    if (!(image->width > 0.0 && image->height > 0.0)) {
      throw Error(ErrorKind::kConfig, "image size must be positive");
    }
    sx = 1.0 / image->width;
    sy = 1.0 / image->height;
  }
  CostMatrix m(gts.size(), samples.size());
  for (std::size_t g = 0; g < gts.size(); ++g) {
    const BBox& gt = gts[g];
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const BBox& p = samples[s].box;
      PairCosts pc;
      try {
        pc.c_cls = cls_cost(samples[s].score, cfg);
        pc.c_giou = giou(p, gt);
      } catch (const Error& e) {
        rethrow_for_pair(e, g, s);
      }
      pc.c_l1 = 0.25 * (std::abs(p.cx() - gt.cx()) * sx +
                        std::abs(p.cy() - gt.cy()) * sy +
                        std::abs(p.width() - gt.width()) * sx +
                        std::abs(p.height() - gt.height()) * sy);
      pc.total = cfg.lambda1 * (pc.c_cls + pc.c_l1) - cfg.lambda2 * pc.c_giou;
      m.at(g, s) = pc;
    }
  }
  return m;
}

}  // namespace crowdmatch
