// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

namespace {

// std distributions are implementation-defined; these transforms keep scenes
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint64_t kPredictionStream = 0x9e3779b97f4a7c15ULL;
constexpr double kDuplicateIou = 0.8;

bool inside(const BBox& b, const SceneSpec& spec) {
  return b.x1() >= 0.0 && b.y1() >= 0.0 && b.x2() <= spec.image_w &&
         b.y2() <= spec.image_h;
}

double draw_height(Rng& rng, const SceneSpec& spec) {
  const double h = spec.height_median * std::exp(spec.height_log_sigma * rng.normal());
  return std::clamp(h, spec.min_height, 0.95 * spec.image_h);
}

BBox draw_free_box(Rng& rng, const SceneSpec& spec) {
  const double h = draw_height(rng, spec);
  const double w = std::min(spec.aspect_ratio * h, spec.image_w);
  const double cx = rng.uniform(0.5 * w, spec.image_w - 0.5 * w);
  const double cy = rng.uniform(0.5 * h, spec.image_h - 0.5 * h);
  return BBox::from_center(cx, cy, w, h);
}

// A neighbor of `anchor`, shifted sideways by 10-50% of its width.
BBox draw_attached_box(Rng& rng, const BBox& anchor, const SceneSpec& spec) {
  const double h = std::clamp(anchor.height() * std::exp(0.1 * rng.normal()),
                              spec.min_height, 0.95 * spec.image_h);
  const double w = spec.aspect_ratio * h;
  const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double cx = anchor.cx() + side * rng.uniform(0.1, 0.5) * anchor.width();
  const double cy = anchor.cy() + 0.05 * anchor.height() * rng.normal();
  return BBox::from_center(cx, cy, w, h);
}

std::optional<BBox> clip_to_image(const BBox& b, const SceneSpec& spec) {
  const double x1 = std::clamp(b.x1(), 0.0, spec.image_w);
  const double y1 = std::clamp(b.y1(), 0.0, spec.image_h);
  const double x2 = std::clamp(b.x2(), 0.0, spec.image_w);
  const double y2 = std::clamp(b.y2(), 0.0, spec.image_h);
  if (x2 <= x1 || y2 <= y1) return std::nullopt;
  return BBox(x1, y1, x2, y2);
}

}  // namespace

void SceneSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfig, msg); };
  if (!(image_w > 0.0 && image_h > 0.0)) fail("image size must be positive");
  if (!(target_pair_iou_rate >= 0.0)) fail("target_pair_iou_rate must be non-negative");
  if (!(pair_iou >= 0.0 && pair_iou < 1.0)) fail("pair_iou must lie in [0, 1)");
  if (!(aspect_ratio > 0.0)) fail("aspect_ratio must be positive");
  if (!(height_median > 0.0) || !(height_log_sigma >= 0.0)) {
    fail("height distribution parameters must be positive");
  }
  if (!(min_height > 0.0)) fail("min_height must be positive");
  if (max_box_attempts == 0) fail("max_box_attempts must be positive");
  const auto& p = prediction;
  if (!(p.hit_prob >= 0.0 && p.hit_prob <= 1.0) ||
      !(p.occluded_hit_prob >= 0.0 && p.occluded_hit_prob <= 1.0)) {
    fail("hit probabilities must lie in [0, 1]");
  }
  if (!(p.center_jitter >= 0.0) || !(p.scale_jitter >= 0.0) || !(p.score_noise >= 0.0)) {
    fail("jitter sigmas must be non-negative");
  }
  if (!(p.clutter_score_low > 0.0 && p.clutter_score_low <= p.clutter_score_high &&
        p.clutter_score_high < 1.0)) {
    fail("clutter score range must lie inside (0, 1)");
  }
}

std::size_t count_pairs_over(std::span<const BBox> boxes, double threshold) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (iou(boxes[i], boxes[j]) > threshold) ++n;
    }
  }
  return n;
}

Scene gen_scene(const SceneSpec& spec) {
  spec.validate();
  if (spec.min_height > 0.95 * spec.image_h ||
      spec.aspect_ratio * spec.min_height > spec.image_w) {
    throw Error(ErrorKind::kGeneration, "image too small for a pedestrian box");
  }
  Rng rng(spec.seed);
  Scene scene;
  const double n = static_cast<double>(spec.n_pedestrians);
  const auto pair_budget =
      static_cast<std::size_t>(std::llround(spec.target_pair_iou_rate));

  for (std::size_t i = 0; i < spec.n_pedestrians; ++i) {
    // Attach while the realized overlap count trails its pro-rata target.
    const double due = spec.target_pair_iou_rate * static_cast<double>(i + 1) / n;
    const bool attach = !scene.gts.empty() &&
                        static_cast<double>(scene.stats.pairs_over) + 0.5 < due;
    bool placed = false;
    for (std::size_t attempt = 0; attempt < spec.max_box_attempts && !placed; ++attempt) {
      ++scene.stats.attempts;
      const BBox cand = attach ? draw_attached_box(
                                     rng, scene.gts[rng.index(scene.gts.size())], spec)
                               : draw_free_box(rng, spec);
      if (!inside(cand, spec)) continue;
      std::size_t new_pairs = 0;
      double max_iou = 0.0;
      for (const auto& g : scene.gts) {
        const double v = iou(cand, g);
        max_iou = std::max(max_iou, v);
        if (v > spec.pair_iou) ++new_pairs;
      }
      if (max_iou > kDuplicateIou) continue;
      if (attach) {
        if (new_pairs == 0 || scene.stats.pairs_over + new_pairs > pair_budget + 1) continue;
      } else if (new_pairs != 0) {
        continue;
      }
      scene.gts.push_back(cand);
      scene.stats.pairs_over += new_pairs;
      scene.stats.max_pair_iou = std::max(scene.stats.max_pair_iou, max_iou);
      placed = true;
    }
    if (!placed) {
      std::ostringstream os;
      os << "could not place pedestrian " << i << " of " << spec.n_pedestrians
         << " after " << spec.max_box_attempts << " attempts";
      throw Error(ErrorKind::kGeneration, os.str());
    }
  }
  return scene;
}

std::vector<Sample> gen_predictions(std::span<const BBox> gts, const SceneSpec& spec) {
  spec.validate();
  const PredictionModel& model = spec.prediction;
  Rng rng(spec.seed ^ kPredictionStream);
  std::vector<Sample> preds;

  for (std::size_t i = 0; i < gts.size(); ++i) {
    const BBox& gt = gts[i];
    double crowding = 0.0;
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (j != i) crowding = std::max(crowding, iou(gt, gts[j]));
    }
    const double p_hit =
        crowding > model.occluded_iou ? model.occluded_hit_prob : model.hit_prob;
    // Draw every variate up front so each gt consumes the same stream length.
    const double u = rng.uniform();
    const double dx = rng.normal(), dy = rng.normal();
    const double sw = rng.normal(), sh = rng.normal();
    const double noise = rng.normal();
    if (u >= p_hit) continue;
    const BBox jittered = BBox::from_center(
        gt.cx() + model.center_jitter * gt.width() * dx,
        gt.cy() + model.center_jitter * gt.height() * dy,
        gt.width() * std::exp(model.scale_jitter * sw),
        gt.height() * std::exp(model.scale_jitter * sh));
    const auto box = clip_to_image(jittered, spec);
    if (!box) continue;
    preds.push_back({*box, clamp_score(iou(*box, gt) + model.score_noise * noise)});
  }

  const std::size_t clutter =
      std::max(model.clutter, gts.size() > preds.size() ? gts.size() - preds.size() : 0);
  for (std::size_t k = 0; k < clutter; ++k) {
    BBox box = draw_free_box(rng, spec);
    for (std::size_t attempt = 1; attempt < 100; ++attempt) {
      double worst = 0.0;
      for (const auto& g : gts) worst = std::max(worst, iou(box, g));
      if (worst < model.clutter_max_iou) break;
      box = draw_free_box(rng, spec);
    }
    const double score = rng.uniform(model.clutter_score_low, model.clutter_score_high);
    preds.push_back({box, clamp_score(score)});
  }

  // Query order carries no meaning in a set-prediction detector.
  for (std::size_t k = preds.size(); k > 1; --k) {
    std::swap(preds[k - 1], preds[rng.index(k)]);
  }
  return preds;
}

}  // namespace crowdmatch
