// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/loss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

namespace {

void check_probability(double p) {
  if (!(p >= kScoreEps && p <= 1.0 - kScoreEps)) {
    std::ostringstream os;
    os << "probability " << p << " outside [eps, 1 - eps]";
    throw Error(ErrorKind::kInputDomain, os.str());
  }
}

void check_label(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::kInputDomain, "label must lie in [0, 1]");
  }
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::kInputDomain, "gamma must be finite and non-negative");
  }
}

}  // namespace

void LossConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kConfig, msg); };
  if (!(gamma_o >= 0.0) || !std::isfinite(gamma_o)) fail("gamma_o must be non-negative");
  if (!(beta >= 0.0 && beta < 1.0)) fail("beta must lie in [0, 1)");
  if (!(clamp_low >= 0.0 && clamp_low <= clamp_high) || !std::isfinite(clamp_high)) {
    fail("gamma clamp must satisfy 0 <= low <= high");
  }
  if (!(gamma_min > 0.0)) fail("gamma_min must be positive");
}

double focal_loss(double p, double y, double gamma) {
  check_probability(p);
  check_gamma(gamma);
  if (y == 1.0) return -std::pow(1.0 - p, gamma) * std::log(p);
  if (y == 0.0) return -std::pow(p, gamma) * std::log1p(-p);
  throw Error(ErrorKind::kInputDomain, "focal loss label must be 0 or 1");
}

double uafl_gamma(double g, double t_g, double y, const LossConfig& cfg) {
  const double adaptive = std::clamp(g - t_g, cfg.clamp_low, cfg.clamp_high);
  return std::max(cfg.gamma_min, cfg.gamma_o + adaptive * (cfg.beta - y));
}

double uafl_loss(double p, double y, double gamma) {
  check_probability(p);
  check_label(y);
  check_gamma(gamma);
  const double d = std::abs(y - p);
  if (d == 0.0) return 0.0;
  const double bce = -(y * std::log(p) + (1.0 - y) * std::log1p(-p));
  return std::pow(d, gamma) * bce;
}

double uafl_grad(double p, double y, double gamma) {
  check_probability(p);
  check_label(y);
  check_gamma(gamma);
  const double d = std::abs(y - p);
  if (d == 0.0) return 0.0;
  const double sign = p > y ? 1.0 : -1.0;
  const double bce = -(y * std::log(p) + (1.0 - y) * std::log1p(-p));
  const double dbce = -(y / p) + (1.0 - y) / (1.0 - p);
  return gamma * std::pow(d, gamma - 1.0) * sign * bce + std::pow(d, gamma) * dbce;
}

void GradientRatioTracker::update(std::size_t sample_index, double grad_as_pos,
                                  double grad_as_neg) {
  const double g = std::abs(grad_as_pos) / (std::abs(grad_as_neg) + eps_);
  ratios_[sample_index] = g;
  // Summed afresh so replaced entries leave no rounding residue in t_g.
  double total = 0.0;
  for (const auto& [_, r] : ratios_) total += r;
  t_g_ = total / static_cast<double>(ratios_.size());
}

void GradientRatioTracker::reset() {
  ratios_.clear();
  t_g_ = 0.0;
}

double GradientRatioTracker::ratio(std::size_t sample_index) const {
  auto it = ratios_.find(sample_index);
  if (it == ratios_.end()) {
    throw Error(ErrorKind::kConsistency, "no gradient ratio for sample " +
                                             std::to_string(sample_index));
  }
  return it->second;
}

LossReport batch_uafl(const Assignment& assignment,
                      std::span<const Sample> samples, std::span<const BBox> gts,
                      GradientRatioTracker& tracker, const LossConfig& cfg) {
  cfg.validate();
  auto mismatch = [](const std::string& msg) {
    throw Error(ErrorKind::kConsistency, msg);
  };

  std::vector<char> seen(samples.size(), 0);
  auto claim = [&](std::size_t s) {
    if (s >= samples.size()) mismatch("sample index " + std::to_string(s) + " out of range");
    if (seen[s]) mismatch("sample " + std::to_string(s) + " assigned twice");
    seen[s] = 1;
  };
  for (const auto& pos : assignment.positives) {
    claim(pos.sample);
    if (pos.gt >= gts.size()) mismatch("gt index " + std::to_string(pos.gt) + " out of range");
  }
  for (std::size_t s : assignment.negatives) claim(s);
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    mismatch("assignment does not cover every sample");
  }

  std::vector<double> soft_label(assignment.positives.size());
  tracker.reset();
  for (std::size_t k = 0; k < assignment.positives.size(); ++k) {
    const auto& pos = assignment.positives[k];
    const double p = samples[pos.sample].score;
    soft_label[k] = iou(samples[pos.sample].box, gts[pos.gt]);
    tracker.update(pos.sample, uafl_grad(p, soft_label[k], cfg.gamma_o),
                   uafl_grad(p, 0.0, cfg.gamma_o));
  }

  LossReport report;
  report.t_g = tracker.threshold();
  report.count_filtered = assignment.filtered.size();
  report.samples.reserve(samples.size());
  for (std::size_t k = 0; k < assignment.positives.size(); ++k) {
    const std::size_t s = assignment.positives[k].sample;
    SampleLoss sl;
    sl.index = s;
    sl.role = SampleRole::kPositive;
    sl.score = samples[s].score;
    sl.y = soft_label[k];
    sl.ratio = tracker.ratio(s);
    sl.gamma = uafl_gamma(sl.ratio, report.t_g, sl.y, cfg);
    sl.loss = uafl_loss(sl.score, sl.y, sl.gamma);
    sl.dloss_dscore = uafl_grad(sl.score, sl.y, sl.gamma);
    report.sum_pos += sl.loss;
    report.samples.push_back(sl);
  }
  for (std::size_t s : assignment.negatives) {
    SampleLoss sl;
    sl.index = s;
    sl.score = samples[s].score;
    sl.gamma = cfg.gamma_o;
    sl.loss = focal_loss(sl.score, 0.0, sl.gamma);
    sl.dloss_dscore = uafl_grad(sl.score, 0.0, sl.gamma);
    report.sum_neg += sl.loss;
    report.samples.push_back(sl);
  }
  std::sort(report.samples.begin(), report.samples.end(),
            [](const SampleLoss& a, const SampleLoss& b) { return a.index < b.index; });
  return report;
}

}  // namespace crowdmatch
