// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/ablation.hpp"

#include "crowdmatch/error.hpp"

namespace crowdmatch {

Assignment assign_image(const SceneImage& image, AssignMethod method,
                        const CostConfig& cfg, const CglaOptions& opts) {
  const auto samples = ingest_samples(image.preds);
  if (method == AssignMethod::kLegacy) {
    return legacy_assign(image.gts, samples, cfg, ImageSize{image.width, image.height});
  }
  return cgla_assign(image.gts, samples, cfg, opts);
}

std::vector<Sample> reweight_scores(std::span<const Sample> samples,
                                    std::span<const BBox> gts,
                                    const Assignment& assignment,
                                    const ProxyConfig& proxy) {
  if (!(proxy.step >= 0.0 && proxy.step <= 1.0)) {
    throw Error(ErrorKind::kConfig, "proxy step must lie in [0, 1]");
  }
  std::vector<Sample> out(samples.begin(), samples.end());
  for (std::size_t s : assignment.negatives) {
    if (s >= out.size()) throw Error(ErrorKind::kConsistency, "negative index out of range");
    out[s].score = clamp_score(out[s].score * (1.0 - proxy.step));
  }
  for (const auto& pos : assignment.positives) {
    if (pos.sample >= out.size() || pos.gt >= gts.size()) {
      throw Error(ErrorKind::kConsistency, "positive index out of range");
    }
    const double y = iou(samples[pos.sample].box, gts[pos.gt]);
    const double p = samples[pos.sample].score;
    if (y > p) out[pos.sample].score = clamp_score(p + proxy.step * (y - p));
  }
  return out;
}

ProxyRun run_proxy(std::span<const SceneImage> images, AssignMethod method,
                   const CostConfig& cfg, const ProxyConfig& proxy,
                   const CglaOptions& opts) {
  ProxyRun run;
  run.detections.reserve(images.size());
  for (const auto& image : images) {
    ImageDetections det;
    det.gts = image.gts;
    if (!image.preds.empty()) {
      const Assignment a = assign_image(image, method, cfg, opts);
      run.positives += a.positives.size();
      run.filtered += a.filtered.size();
      run.negatives += a.negatives.size();
      det.dets = reweight_scores(ingest_samples(image.preds), image.gts, a, proxy);
    }
    run.detections.push_back(std::move(det));
  }
  return run;
}

std::vector<SweepRow> run_sweep(std::span<const SceneImage> images,
                                std::span<const double> alphas,
                                std::span<const double> betas,
                                const CostConfig& base, const ProxyConfig& proxy,
                                const EvalOptions& eval) {
  if (alphas.empty() || betas.empty()) {
    throw Error(ErrorKind::kConfig, "sweep grid must be non-empty");
  }
  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    for (double beta : betas) {
      CostConfig cfg = base;
      cfg.alpha = alpha;
      cfg.beta = beta;
      cfg.validate();
      const ProxyRun run = run_proxy(images, AssignMethod::kCgla, cfg, proxy);
      SweepRow row;
      row.alpha = alpha;
      row.beta = beta;
      row.positives = run.positives;
      row.filtered = run.filtered;
      const std::size_t matched = run.positives + run.filtered;
      row.filtered_rate =
          matched == 0 ? 0.0 : static_cast<double>(run.filtered) / static_cast<double>(matched);
      row.mr = evaluate(run.detections, eval).mr;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace crowdmatch
