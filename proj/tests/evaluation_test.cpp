// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "crowdmatch/error.hpp"
#include "crowdmatch/evaluation.hpp"

using namespace crowdmatch;

namespace {

BBox ped(double x) { return BBox(x, 0, x + 10, 20); }

// Two images, four gts, six detections; see the expected curve below.
std::vector<ImageDetections> hand_case() {
  std::vector<ImageDetections> v(2);
  v[0].gts = {ped(0), ped(100)};
  v[0].dets = {{ped(0), 0.9}, {ped(50), 0.8}, {ped(100), 0.3}};
  v[1].gts = {ped(0), ped(100)};
  v[1].dets = {{ped(0), 0.7}, {ped(200), 0.6}, {ped(104), 0.2}};
  return v;
}

std::vector<ImageDetections> random_set(std::mt19937& rng, std::size_t images) {
  std::uniform_real_distribution<double> pos(0, 300), jit(-6, 6), sc(0.0, 1.0);
  std::uniform_int_distribution<int> ng(0, 5), nd(0, 9);
  std::vector<ImageDetections> v(images);
  for (auto& im : v) {
    const int g = ng(rng);
    for (int i = 0; i < g; ++i) im.gts.push_back(ped(pos(rng)));
    const int d = nd(rng);
    for (int i = 0; i < d; ++i) {
      const double x = (!im.gts.empty() && sc(rng) < 0.6)
                           ? im.gts[static_cast<std::size_t>(i) % im.gts.size()].x1() + jit(rng)
                           : pos(rng);
      im.dets.push_back({ped(x), std::clamp(sc(rng), 0.01, 0.99)});
    }
  }
  return v;
}

}  // namespace

TEST_CASE("greedy matching") {
  const std::vector<BBox> gts{ped(0), ped(5)};
  SUBCASE("higher score claims first") {
    const std::vector<Sample> dets{{ped(1), 0.4}, {ped(0), 0.9}};
    const ImageMatch m = match_detections(dets, gts);
    REQUIRE(m.outcomes.size() == 2);
    CHECK(m.outcomes[0].index == 1);
    CHECK(m.outcomes[0].gt == 0u);
    CHECK(m.outcomes[1].true_positive == false);  // IoU with ped(5) is 5/15
    CHECK(m.tp == 1);
    CHECK(m.fp == 1);
    CHECK(m.fn == 1);
  }
  SUBCASE("equal IoU prefers the lower gt index") {
    const std::vector<BBox> twins{ped(0), ped(0)};
    const std::vector<Sample> dets{{ped(0), 0.5}};
    const ImageMatch m = match_detections(dets, twins);
    CHECK(m.outcomes[0].gt == 0u);
    CHECK(m.fn == 1);
  }
  SUBCASE("duplicate detection is a false positive with IoU 1") {
    const std::vector<Sample> dets{{ped(0), 0.9}, {ped(0), 0.8}};
    const ImageMatch m = match_detections(dets, std::span<const BBox>(gts.data(), 1));
    CHECK(m.outcomes[1].true_positive == false);
    CHECK(m.outcomes[1].best_iou == 1.0);
  }
  SUBCASE("threshold is inclusive") {
    const std::vector<BBox> g{BBox(0, 0, 30, 10)};
    const std::vector<Sample> d{{BBox(10, 0, 40, 10), 0.5}};  // 200 / 400
    CHECK(match_detections(d, g).tp == 1);
  }
}

TEST_CASE("iou intervals") {
  CHECK(iou_interval(0.0) == 0);
  CHECK(iou_interval(0.19999) == 0);
  CHECK(iou_interval(0.2) == 1);
  CHECK(iou_interval(0.45) == 2);
  CHECK(iou_interval(0.6) == 3);
  CHECK(iou_interval(0.8) == 4);
  CHECK(iou_interval(1.0) == 4);
  CHECK_THROWS_AS(iou_interval(-0.1), Error);
  CHECK_THROWS_AS(iou_interval(1.5), Error);
  const std::vector<double> ious{0.0, 0.45, 0.45, 1.0};
  CHECK(fp_interval_histogram(ious) == FpHistogram{1, 0, 2, 0, 1});
}

TEST_CASE("hand-computed miss rate") {
  const auto set = hand_case();
  const EvalResult r = evaluate(set);
  CHECK(r.tp == 3);
  CHECK(r.fp == 3);
  CHECK(r.fn == 1);
  CHECK(r.fp_histogram == FpHistogram{2, 0, 1, 0, 0});

  REQUIRE(r.curve.size() == 6);
  const double fppi[] = {0, 0.5, 0.5, 1.0, 1.0, 1.5};
  const double mr[] = {0.75, 0.75, 0.5, 0.5, 0.25, 0.25};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(r.curve[i].fppi == doctest::Approx(fppi[i]).epsilon(1e-15));
    CHECK(r.curve[i].miss_rate == doctest::Approx(mr[i]).epsilon(1e-15));
  }
  // Targets below 0.5 see 0.75; 0.5 <= t < 1 sees 0.5; t = 1 sees 0.25.
  const double expected = std::pow(std::pow(0.75, 7) * 0.5 * 0.25, 1.0 / 9.0);
  CHECK(r.mr == doctest::Approx(expected).epsilon(1e-12));
  CHECK(r.mr == doctest::Approx(0.6346).epsilon(1e-3));
}

TEST_CASE("miss rate edge cases") {
  std::vector<ImageDetections> set(1);
  set[0].gts = {ped(0), ped(100)};
  CHECK(evaluate(set).mr == 1.0);
  set[0].dets = {{ped(0), 0.9}, {ped(100), 0.8}};
  CHECK(evaluate(set).mr == 0.0);
  // Everything missed and no FP still yields 1.
  set[0].dets = {{ped(400), 0.9}};
  CHECK(evaluate(set).mr == 1.0);
  CHECK(log_average_mr(std::vector<CurvePoint>{}) == 1.0);

  EvalOptions bad;
  bad.mr_points = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.fppi_low = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("deleting a false positive never raises the miss rate") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto set = random_set(rng, 4);
    const double before = evaluate(set).mr;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const ImageMatch m = match_detections(set[i].dets, set[i].gts);
      for (const auto& o : m.outcomes) {
        if (o.true_positive) continue;
        auto copy = set;
        // Removing an unmatched detection leaves the other matches unchanged
        // only if it did not block anything; it never claimed a gt, so it
        // cannot have.
        copy[i].dets.erase(copy[i].dets.begin() + static_cast<std::ptrdiff_t>(o.index));
        CHECK(evaluate(copy).mr <= before + 1e-15);
      }
    }
  }
}

TEST_CASE("miss rate ignores detection order when scores are distinct") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto set = random_set(rng, 3);
    const EvalResult a = evaluate(set);
    for (auto& im : set) std::shuffle(im.dets.begin(), im.dets.end(), rng);
    const EvalResult b = evaluate(set);
    CHECK(a.mr == b.mr);
    CHECK(a.fp_histogram == b.fp_histogram);
  }
}

TEST_CASE("miss rate lies in [0, 1]") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const double mr = evaluate(random_set(rng, 5)).mr;
    CHECK(mr >= 0.0);
    CHECK(mr <= 1.0);
  }
}

TEST_CASE("valid count and equal-count comparison") {
  const auto set = hand_case();
  // fppi stays <= 1 down to score 0.3; the 0.2 detection pushes it to 1.5.
  CHECK(valid_prediction_count(set) == 5);

  const auto top = truncate_top_k(set, 2);
  CHECK(top[0].dets.size() == 2);
  CHECK(top[1].dets.empty());
  CHECK(truncate_top_k(set, 100)[1].dets.size() == 3);

  auto noisy = set;
  noisy[0].dets.push_back({ped(3.5), 0.95});  // IoU 6.5 / 13.5, an FP
  const FpComparison c = compare_fp_intervals(set, noisy);
  CHECK(c.k == std::min(valid_prediction_count(set), valid_prediction_count(noisy)));
  std::size_t first = 0, second = 0;
  for (std::size_t b = 0; b < kIouIntervals; ++b) {
    first += c.first[b];
    second += c.second[b];
  }
  CHECK(second >= first);
  CHECK(c.second[2] >= 1);
}

TEST_CASE("image count mismatch is rejected") {
  const auto set = hand_case();
  CHECK_THROWS_AS(compare_fp_intervals(set, std::span<const ImageDetections>(set.data(), 1)),
                  Error);
}
