// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <utility>

namespace crowdmatch {

/// Axis-aligned box in absolute pixel coordinates, stored in corner form.
///
/// Construction validates `x2 >= x1` and `y2 >= y1`; zero-area boxes are
/// allowed. Center-size form is only produced on request.
class BBox {
 public:
  BBox() = default;
  BBox(double x1, double y1, double x2, double y2);

  static BBox from_center(double cx, double cy, double w, double h);

  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double x2() const { return x2_; }
  double y2() const { return y2_; }

  double cx() const { return 0.5 * (x1_ + x2_); }
  double cy() const { return 0.5 * (y1_ + y2_); }
  double width() const { return x2_ - x1_; }
  double height() const { return y2_ - y1_; }
  double area() const { return width() * height(); }

  BBox translated(double dx, double dy) const;
  BBox scaled(double factor, double ox = 0.0, double oy = 0.0) const;

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double x1_ = 0.0;
  double y1_ = 0.0;
  double x2_ = 0.0;
  double y2_ = 0.0;
};

double intersection_area(const BBox& a, const BBox& b);

/// Intersection over union. Throws kDegenerateGeometry when both boxes have
/// zero area.
double iou(const BBox& a, const BBox& b);

/// Generalized IoU in [-1, 1]. Throws kDegenerateGeometry when the smallest
/// enclosing box has zero area.
double giou(const BBox& a, const BBox& b);

/// Per-axis absolute distance between box centers: (|dcx|, |dcy|).
std::pair<double, double> center_l1(const BBox& a, const BBox& b);

}  // namespace crowdmatch
