// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

namespace {

// Evaluation is total: a pair of zero-area boxes simply does not overlap.
double overlap(const BBox& a, const BBox& b) {
  if (a.area() == 0.0 && b.area() == 0.0) return 0.0;
  return iou(a, b);
}

std::vector<double> fppi_targets(const EvalOptions& opts) {
  std::vector<double> out(opts.mr_points);
  const double lo = std::log10(opts.fppi_low);
  const double hi = std::log10(opts.fppi_high);
  for (std::size_t k = 0; k < opts.mr_points; ++k) {
    const double t = opts.mr_points == 1
                         ? 0.0
                         : static_cast<double>(k) / static_cast<double>(opts.mr_points - 1);
    out[k] = std::pow(10.0, lo + t * (hi - lo));
  }
  return out;
}

std::vector<ImageMatch> match_all(std::span<const ImageDetections> images,
                                  double iou_threshold) {
  std::vector<ImageMatch> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    out.push_back(match_detections(img.dets, img.gts, iou_threshold));
  }
  return out;
}

}  // namespace

void EvalOptions::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorKind::kConfig, "iou_threshold must lie in (0, 1]");
  }
  if (!(fppi_low > 0.0 && fppi_low <= fppi_high) || !std::isfinite(fppi_high)) {
    throw Error(ErrorKind::kConfig, "FPPI range must satisfy 0 < low <= high");
  }
  if (mr_points == 0) throw Error(ErrorKind::kConfig, "mr_points must be positive");
}

ImageMatch match_detections(std::span<const Sample> dets,
                            std::span<const BBox> gts, double iou_threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  ImageMatch m;
  std::vector<char> claimed(gts.size(), 0);
  for (std::size_t d : order) {
    DetectionOutcome o;
    o.index = d;
    o.score = dets[d].score;
    double best_free = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v = overlap(dets[d].box, gts[g]);
      o.best_iou = std::max(o.best_iou, v);
      if (!claimed[g] && v >= iou_threshold && v > best_free) {
        best_free = v;
        o.gt = g;
      }
    }
    if (o.gt) {
      claimed[*o.gt] = 1;
      o.true_positive = true;
      ++m.tp;
    } else {
      ++m.fp;
    }
    m.outcomes.push_back(o);
  }
  m.fn = gts.size() - m.tp;
  return m;
}

std::vector<CurvePoint> miss_rate_curve(std::span<const ImageMatch> images) {
  struct Entry {
    double score;
    std::size_t image;
    std::size_t rank;
    bool tp;
  };
  std::vector<Entry> entries;
  std::size_t total_gts = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    total_gts += images[i].tp + images[i].fn;
    for (std::size_t r = 0; r < images[i].outcomes.size(); ++r) {
      const auto& o = images[i].outcomes[r];
      entries.push_back({o.score, i, r, o.true_positive});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(b.score, a.image, a.rank) < std::tie(a.score, b.image, b.rank);
  });

  const double n_images = static_cast<double>(std::max<std::size_t>(images.size(), 1));
  std::vector<CurvePoint> curve;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    entries[k].tp ? ++tp : ++fp;
    const bool group_end = k + 1 == entries.size() || entries[k + 1].score != entries[k].score;
    if (!group_end) continue;
    CurvePoint pt;
    pt.score = entries[k].score;
    pt.fppi = static_cast<double>(fp) / n_images;
    pt.miss_rate = total_gts == 0
                       ? 0.0
                       : 1.0 - static_cast<double>(tp) / static_cast<double>(total_gts);
    curve.push_back(pt);
  }
  return curve;
}

double log_average_mr(std::span<const CurvePoint> curve, const EvalOptions& opts) {
  opts.validate();
  double log_sum = 0.0;
  for (double target : fppi_targets(opts)) {
    double mr = 1.0;
    for (const auto& pt : curve) {
      if (pt.fppi > target) break;
      mr = pt.miss_rate;
    }
    // A zero factor makes the geometric mean exactly zero.
    if (mr <= 0.0) return 0.0;
    log_sum += std::log(mr);
  }
  return std::exp(log_sum / static_cast<double>(opts.mr_points));
}

std::size_t iou_interval(double best_iou) {
  if (!(best_iou >= 0.0 && best_iou <= 1.0)) {
    throw Error(ErrorKind::kInputDomain, "IoU outside [0, 1]");
  }
  if (best_iou < 0.2) return 0;
  if (best_iou < 0.4) return 1;
  if (best_iou < 0.6) return 2;
  if (best_iou < 0.8) return 3;
  return 4;
}

FpHistogram fp_interval_histogram(std::span<const double> fp_best_ious) {
  FpHistogram h{};
  for (double v : fp_best_ious) ++h[iou_interval(v)];
  return h;
}

EvalResult evaluate(std::span<const ImageDetections> images, const EvalOptions& opts) {
  opts.validate();
  const std::vector<ImageMatch> matches = match_all(images, opts.iou_threshold);
  EvalResult r;
  r.images = images.size();
  std::vector<double> fp_ious;
  for (const auto& m : matches) {
    r.detections += m.outcomes.size();
    r.tp += m.tp;
    r.fp += m.fp;
    r.fn += m.fn;
    for (const auto& o : m.outcomes) {
      if (!o.true_positive) fp_ious.push_back(o.best_iou);
    }
  }
  r.curve = miss_rate_curve(matches);
  r.mr = log_average_mr(r.curve, opts);
  r.fp_histogram = fp_interval_histogram(fp_ious);
  return r;
}

std::size_t valid_prediction_count(std::span<const ImageDetections> images,
                                   const EvalOptions& opts) {
  opts.validate();
  const auto curve = miss_rate_curve(match_all(images, opts.iou_threshold));
  std::optional<double> cutoff;
  for (const auto& pt : curve) {
    if (pt.fppi > opts.fppi_high) break;
    cutoff = pt.score;
  }
  if (!cutoff) return 0;
  std::size_t n = 0;
  for (const auto& img : images) {
    for (const auto& d : img.dets) n += d.score >= *cutoff ? 1 : 0;
  }
  return n;
}

std::vector<ImageDetections> truncate_top_k(std::span<const ImageDetections> images,
                                            std::size_t k) {
  struct Ref {
    double score;
    std::size_t image;
    std::size_t det;
  };
  std::vector<Ref> refs;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t d = 0; d < images[i].dets.size(); ++d) {
      refs.push_back({images[i].dets[d].score, i, d});
    }
  }
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    return std::tie(b.score, a.image, a.det) < std::tie(a.score, b.image, b.det);
  });
  refs.resize(std::min(k, refs.size()));
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    return std::tie(a.image, a.det) < std::tie(b.image, b.det);
  });

  std::vector<ImageDetections> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) out[i].gts = images[i].gts;
  for (const auto& r : refs) out[r.image].dets.push_back(images[r.image].dets[r.det]);
  return out;
}

FpComparison compare_fp_intervals(std::span<const ImageDetections> first,
                                  std::span<const ImageDetections> second,
                                  const EvalOptions& opts) {
  if (first.size() != second.size()) {
    throw Error(ErrorKind::kShapeMismatch, "detectors evaluated on different image sets");
  }
  FpComparison c;
  c.k = std::min(valid_prediction_count(first, opts), valid_prediction_count(second, opts));
  c.first = evaluate(truncate_top_k(first, c.k), opts).fp_histogram;
  c.second = evaluate(truncate_top_k(second, c.k), opts).fp_histogram;
  return c;
}

}  // namespace crowdmatch
