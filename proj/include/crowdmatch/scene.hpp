// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstdint>
#include <vector>

#include "crowdmatch/geometry.hpp"
#include "crowdmatch/sample.hpp"

namespace crowdmatch {

/// One image of a scene file: annotations plus the predictions to assign.
struct SceneImage {
  std::int64_t id = 0;
  double width = 0.0;
  double height = 0.0;
  std::vector<BBox> gts;
  std::vector<Sample> preds;
};

}  // namespace crowdmatch
