// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crowdmatch/ablation.hpp"
#include "crowdmatch/assignment.hpp"
#include "crowdmatch/evaluation.hpp"
#include "crowdmatch/loss.hpp"
#include "crowdmatch/scene.hpp"

namespace crowdmatch {

inline constexpr int kSchemaVersion = 1;

// Scene file layout:
//   { "schema": 1,
//     "images": [ { "id", "width", "height",
//                   "gts": [[x1, y1, x2, y2], ...],
//                   "preds": [ { "box": [x1, y1, x2, y2], "score" }, ... ] } ] }
// "gts" and "preds" may be omitted and default to empty.

std::vector<SceneImage> parse_scenes(std::string_view text,
                                     std::string_view source = "<input>");
std::vector<SceneImage> read_scenes(const std::filesystem::path& path);

nlohmann::json scenes_to_json(std::span<const SceneImage> images);

nlohmann::json assignment_to_json(std::int64_t image_id, const Assignment& a);
nlohmann::json loss_report_to_json(std::int64_t image_id, const LossReport& r);
nlohmann::json eval_result_to_json(const EvalResult& r);
nlohmann::json sweep_to_json(std::span<const SweepRow> rows);

/// Plain-text table of false positives per IoU interval.
std::string fp_histogram_table(const FpHistogram& h);
std::string sweep_table(std::span<const SweepRow> rows);

/// Serialized form used for every output file: two-space indent plus a
/// trailing newline.
std::string dump_json(const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace crowdmatch
