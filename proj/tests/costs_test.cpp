// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "crowdmatch/costs.hpp"
#include "crowdmatch/error.hpp"

using namespace crowdmatch;

TEST_CASE("cls_cost") {
  const CostConfig cfg;
  // 0.25 * 0.25 * ln 2 - 0.75 * 0.25 * ln 2
  CHECK(cls_cost(0.5, cfg) == doctest::Approx(-0.125 * std::log(2.0)).epsilon(1e-12));
  CHECK(cls_cost(0.5, cfg) == doctest::Approx(-0.0866).epsilon(1e-3));
  CHECK(cls_cost(0.9, cfg) < cls_cost(0.1, cfg));

  double prev = cls_cost(kScoreEps, cfg);
  for (int i = 1; i <= 1000; ++i) {
    const double s = clamp_score(i / 1000.0);
    const double c = cls_cost(s, cfg);
    CHECK(c < prev);
    CHECK(std::isfinite(c));
    prev = c;
  }
  CHECK_THROWS_AS(cls_cost(0.0, cfg), Error);
  CHECK_THROWS_AS(cls_cost(1.0, cfg), Error);
  CHECK(clamp_score(1.0) == 1.0 - kScoreEps);
  CHECK(clamp_score(-3.0) == kScoreEps);
  CHECK_THROWS_AS(clamp_score(NAN), Error);
}

TEST_CASE("center constraint") {
  const BBox gt = BBox::from_center(500, 500, 100, 200);
  CHECK(cenx_cost(gt, gt, 0.3) == 0.0);
  CHECK(cenx_cost(gt.translated(20, 0), gt, 0.3) == 0.0);
  CHECK(cenx_cost(gt.translated(-40, 0), gt, 0.3) == -1.0);
  // |dx| == alpha * w keeps the pair (0.25 * 100 is exact).
  CHECK(cenx_cost(gt.translated(25, 0), gt, 0.25) == 0.0);
  CHECK(cenx_cost(gt.translated(25.001, 0), gt, 0.25) == -1.0);
  CHECK(ceny_cost(gt.translated(0, -50), gt, 0.25) == 0.0);
  CHECK(ceny_cost(gt.translated(0, -50.001), gt, 0.25) == -1.0);
  CHECK(ceny_cost(gt.translated(0, 60), gt, 0.3) == 0.0);
  CHECK(ceny_cost(gt.translated(0, 61), gt, 0.3) == -1.0);
  CHECK_THROWS_AS(cenx_cost(gt, BBox(3, 0, 3, 10), 0.3), Error);
  CHECK_THROWS_AS(ceny_cost(gt, BBox(0, 3, 10, 3), 0.3), Error);
}

TEST_CASE("position constraint") {
  const BBox gt(0, 0, 10, 10);
  CHECK(pos_cost(gt, gt, 0.6) == 0.0);
  // 70 / 100 and 60 / 100.
  CHECK(pos_cost(BBox(0, 0, 10, 7), gt, 0.6) == 0.0);
  CHECK(pos_cost(BBox(0, 0, 10, 6), gt, 0.6) == -1.0);
  CHECK(pos_cost(BBox(50, 50, 60, 60), gt, 0.0) == -1.0);
  CHECK(pos_cost(BBox(5, 0, 15, 10), gt, 0.0) == 0.0);
}

TEST_CASE("build_cost_matrix") {
  CostConfig cfg;
  const std::vector<BBox> gts{BBox(0, 0, 40, 100)};

  SUBCASE("perfect match") {
    const std::vector<Sample> s{{gts[0], 0.99}};
    const CostMatrix m = build_cost_matrix(gts, s, cfg);
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 1);
    const PairCosts& pc = m.at(0, 0);
    CHECK(pc.learnable);
    CHECK(pc.total == cfg.lambda1 * cls_cost(0.99, cfg) - cfg.lambda2 * 1.0);
  }

  SUBCASE("violations add lambda2 each") {
    const std::vector<Sample> s{{gts[0].translated(100, 100), 0.5},
                                {gts[0].translated(100, 0), 0.5},
                                {gts[0].translated(5, 0), 0.5}};
    const CostMatrix m = build_cost_matrix(gts, s, cfg);
    const PairCosts& far = m.at(0, 0);
    CHECK(far.c_cenx == -1.0);
    CHECK(far.c_ceny == -1.0);
    CHECK(far.c_pos == -1.0);
    CHECK_FALSE(far.learnable);
    const double base = cfg.lambda1 * far.c_cls - cfg.lambda2 * far.c_giou;
    CHECK(far.total - base == doctest::Approx(3.0 * cfg.lambda2).epsilon(1e-12));

    const PairCosts& side = m.at(0, 1);
    CHECK(side.c_cenx == -1.0);
    CHECK(side.c_ceny == 0.0);
    CHECK(side.c_pos == -1.0);

    const PairCosts& near = m.at(0, 2);
    CHECK(near.learnable);
    CHECK(near.total == doctest::Approx(cfg.lambda1 * near.c_cls - cfg.lambda2 * near.c_giou));
  }

  SUBCASE("constraint cost can be switched off while flags remain") {
    cfg.constraint_cost = false;
    const std::vector<Sample> s{{gts[0].translated(100, 100), 0.5}};
    const PairCosts pc = build_cost_matrix(gts, s, cfg).at(0, 0);
    CHECK_FALSE(pc.learnable);
    CHECK(pc.total == cfg.lambda1 * pc.c_cls - cfg.lambda2 * pc.c_giou);
  }

  SUBCASE("empty inputs") {
    const std::vector<Sample> s{{BBox(0, 0, 5, 5), 0.3}, {BBox(1, 1, 5, 5), 0.3}};
    const CostMatrix m = build_cost_matrix({}, s, cfg);
    CHECK(m.rows() == 0);
    CHECK(m.cols() == 2);
    CHECK_THROWS_WITH_AS(build_cost_matrix(gts, {}, cfg), doctest::Contains("empty"), Error);
  }

  SUBCASE("geometry errors name the pair") {
    const std::vector<BBox> bad{gts[0], BBox(5, 5, 5, 20)};
    const std::vector<Sample> s{{gts[0], 0.5}};
    CHECK_THROWS_WITH_AS(build_cost_matrix(bad, s, cfg), doctest::Contains("gt 1, sample 0"),
                         Error);
  }
}

TEST_CASE("cost totals: finite and a violation always costs more") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pos(0, 400), size(5, 150), score(0, 1);
  const CostConfig cfg;
  for (int i = 0; i < 500; ++i) {
    const BBox gt = BBox::from_center(pos(rng), pos(rng), size(rng), size(rng));
    const Sample s{BBox::from_center(pos(rng), pos(rng), size(rng), size(rng)),
                   clamp_score(score(rng))};
    const PairCosts pc = pair_costs(gt, s, cfg);
    CHECK(std::isfinite(pc.total));
    CHECK(pc.learnable == (pc.c_cenx == 0.0 && pc.c_ceny == 0.0 && pc.c_pos == 0.0));
    const double violations = -(pc.c_cenx + pc.c_ceny + pc.c_pos);
    const double base = cfg.lambda1 * pc.c_cls - cfg.lambda2 * pc.c_giou;
    CHECK(pc.total - base == doctest::Approx(violations * cfg.lambda2));
    CHECK(pair_costs(gt, s, cfg).total == pc.total);
  }
}

TEST_CASE("legacy cost matrix") {
  const CostConfig cfg;
  const BBox gt(0, 0, 10, 20);
  const std::vector<BBox> gts{gt};

  const std::vector<Sample> same{{gt, 0.7}};
  const PairCosts pc = build_legacy_cost_matrix(gts, same, cfg, std::nullopt).at(0, 0);
  CHECK(pc.c_l1 == 0.0);
  CHECK(pc.learnable);
  CHECK(pc.total == cfg.lambda1 * cls_cost(0.7, cfg) - cfg.lambda2 * 1.0);

  // Same GIoU at twice the scale costs twice the L1 in pixel units.
  const std::vector<Sample> small{{BBox(2, 0, 12, 20), 0.7}};
  const std::vector<BBox> big_gts{gt.scaled(2.0)};
  const std::vector<Sample> big{{BBox(2, 0, 12, 20).scaled(2.0), 0.7}};
  const PairCosts s = build_legacy_cost_matrix(gts, small, cfg, std::nullopt).at(0, 0);
  const PairCosts b = build_legacy_cost_matrix(big_gts, big, cfg, std::nullopt).at(0, 0);
  CHECK(s.c_giou == doctest::Approx(b.c_giou).epsilon(1e-12));
  CHECK(b.c_l1 > s.c_l1);
  CHECK(b.c_l1 == doctest::Approx(2.0 * s.c_l1));
  CHECK(s.c_l1 == doctest::Approx(0.5));  // mean of |dcx| = 2 and three zeros

  // Normalized: dx / W.
  const PairCosts n =
      build_legacy_cost_matrix(gts, small, cfg, ImageSize{100, 50}).at(0, 0);
  CHECK(n.c_l1 == doctest::Approx(0.25 * 2.0 / 100.0));

  const std::vector<BBox> three{gt, gt, gt};
  const std::vector<Sample> five(5, Sample{gt, 0.5});
  const CostMatrix m = build_legacy_cost_matrix(three, five, cfg, ImageSize{640, 480});
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 5);
  CHECK(m.totals().rows() == 3);
  CHECK_THROWS_AS(build_legacy_cost_matrix(gts, same, cfg, ImageSize{0, 10}), Error);
}

TEST_CASE("cost config validation") {
  CostConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.beta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.lambda1 = 0.0;
  cfg.lambda2 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.alpha = std::numeric_limits<double>::infinity();
  cfg.beta = 0.0;
  CHECK_NOTHROW(cfg.validate());
}
