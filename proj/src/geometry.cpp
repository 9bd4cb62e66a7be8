// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

BBox::BBox(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!std::isfinite(x1) || !std::isfinite(y1) || !std::isfinite(x2) ||
      !std::isfinite(y2)) {
    throw Error(ErrorKind::kInvalidBox, "non-finite coordinate");
  }
  if (x2 < x1 || y2 < y1) {
    std::ostringstream os;
    os << "negative extent (" << x1 << ", " << y1 << ", " << x2 << ", " << y2
       << ")";
    throw Error(ErrorKind::kInvalidBox, os.str());
  }
}

BBox BBox::from_center(double cx, double cy, double w, double h) {
  return BBox(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
}

BBox BBox::translated(double dx, double dy) const {
  return BBox(x1_ + dx, y1_ + dy, x2_ + dx, y2_ + dy);
}

BBox BBox::scaled(double factor, double ox, double oy) const {
  if (!(factor >= 0.0)) {
    throw Error(ErrorKind::kInputDomain, "scale factor must be non-negative");
  }
  return BBox(ox + factor * (x1_ - ox), oy + factor * (y1_ - oy),
              ox + factor * (x2_ - ox), oy + factor * (y2_ - oy));
}

double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (a.area() == 0.0 && b.area() == 0.0) {
    throw Error(ErrorKind::kDegenerateGeometry, "IoU of two zero-area boxes");
  }
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou(const BBox& a, const BBox& b) {
  const double cw = std::max(a.x2(), b.x2()) - std::min(a.x1(), b.x1());
  const double ch = std::max(a.y2(), b.y2()) - std::min(a.y1(), b.y1());
  const double enclosing = cw * ch;
  if (!(enclosing > 0.0)) {
    throw Error(ErrorKind::kDegenerateGeometry, "zero-area enclosing box");
  }
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  // Two zero-area boxes with a non-degenerate hull do not overlap.
  const double overlap = uni > 0.0 ? inter / uni : 0.0;
  return std::clamp(overlap - (enclosing - uni) / enclosing, -1.0, 1.0);
}

std::pair<double, double> center_l1(const BBox& a, const BBox& b) {
  return {std::abs(a.cx() - b.cx()), std::abs(a.cy() - b.cy())};
}

}  // namespace crowdmatch
