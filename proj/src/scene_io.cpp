// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/scene_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::kParse, field + ": " + msg);
}

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

BBox box_at(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) field_error(field, "expected [x1, y1, x2, y2]");
  double v[4];
  for (std::size_t k = 0; k < 4; ++k) {
    v[k] = number_at(j[k], field + "[" + std::to_string(k) + "]");
  }
  try {
    return BBox(v[0], v[1], v[2], v[3]);
  } catch (const Error& e) {
    throw Error(e.kind(), field + ": " + e.what());
  }
}

SceneImage image_at(const json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object");
  SceneImage img;
  if (!j.contains("id") || !j["id"].is_number_integer()) {
    field_error(field + ".id", "expected an integer");
  }
  img.id = j["id"].get<std::int64_t>();
  img.width = j.contains("width") ? number_at(j["width"], field + ".width") : 0.0;
  img.height = j.contains("height") ? number_at(j["height"], field + ".height") : 0.0;
  if (j.contains("gts")) {
    const json& gts = j["gts"];
    if (!gts.is_array()) field_error(field + ".gts", "expected an array");
    for (std::size_t k = 0; k < gts.size(); ++k) {
      img.gts.push_back(box_at(gts[k], field + ".gts[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("preds")) {
    const json& preds = j["preds"];
    if (!preds.is_array()) field_error(field + ".preds", "expected an array");
    for (std::size_t k = 0; k < preds.size(); ++k) {
      const std::string pf = field + ".preds[" + std::to_string(k) + "]";
      if (!preds[k].is_object() || !preds[k].contains("box") || !preds[k].contains("score")) {
        field_error(pf, "expected {\"box\": [...], \"score\": s}");
      }
      Sample s;
      s.box = box_at(preds[k]["box"], pf + ".box");
      s.score = number_at(preds[k]["score"], pf + ".score");
      img.preds.push_back(s);
    }
  }
  return img;
}

json box_json(const BBox& b) { return json::array({b.x1(), b.y1(), b.x2(), b.y2()}); }

}  // namespace

std::vector<SceneImage> parse_scenes(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
    std::ostringstream os;
    os << source << ":" << line << ": malformed JSON (" << e.what() << ")";
    throw Error(ErrorKind::kParse, os.str());
  }
  if (!root.is_object()) field_error(std::string(source), "top level must be an object");
  if (!root.contains("schema") || !root["schema"].is_number_integer()) {
    field_error("schema", "missing integer schema version");
  }
  const int version = root["schema"].get<int>();
  if (version != kSchemaVersion) {
    throw Error(ErrorKind::kVersion, "schema version " + std::to_string(version) +
                                         " is not supported (expected " +
                                         std::to_string(kSchemaVersion) + ")");
  }
  if (!root.contains("images") || !root["images"].is_array()) {
    field_error("images", "expected an array");
  }
  std::vector<SceneImage> images;
  for (std::size_t i = 0; i < root["images"].size(); ++i) {
    images.push_back(image_at(root["images"][i], "images[" + std::to_string(i) + "]"));
  }
  return images;
}

std::vector<SceneImage> read_scenes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenes(buf.str(), path.string());
}

json scenes_to_json(std::span<const SceneImage> images) {
  json arr = json::array();
  for (const auto& img : images) {
    json gts = json::array();
    for (const auto& g : img.gts) gts.push_back(box_json(g));
    json preds = json::array();
    for (const auto& p : img.preds) preds.push_back({{"box", box_json(p.box)}, {"score", p.score}});
    arr.push_back({{"id", img.id},
                   {"width", img.width},
                   {"height", img.height},
                   {"gts", std::move(gts)},
                   {"preds", std::move(preds)}});
  }
  return {{"schema", kSchemaVersion}, {"images", std::move(arr)}};
}

json assignment_to_json(std::int64_t image_id, const Assignment& a) {
  json pos = json::array();
  for (const auto& p : a.positives) {
    pos.push_back({{"gt", p.gt},
                   {"sample", p.sample},
                   {"total", p.costs.total},
                   {"c_cls", p.costs.c_cls},
                   {"c_giou", p.costs.c_giou},
                   {"c_cenx", p.costs.c_cenx},
                   {"c_ceny", p.costs.c_ceny},
                   {"c_pos", p.costs.c_pos}});
  }
  json filtered = json::array();
  for (const auto& f : a.filtered) filtered.push_back(json::array({f.row, f.col}));
  return {{"id", image_id},
          {"positives", std::move(pos)},
          {"filtered", std::move(filtered)},
          {"negatives", a.negatives},
          {"total_cost", a.total_cost}};
}

json loss_report_to_json(std::int64_t image_id, const LossReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"index", s.index},
                       {"role", s.role == SampleRole::kPositive ? "pos" : "neg"},
                       {"score", s.score},
                       {"y", s.y},
                       {"gamma", s.gamma},
                       {"ratio", s.ratio},
                       {"loss", s.loss},
                       {"dloss_dscore", s.dloss_dscore}});
  }
  return {{"id", image_id},
          {"samples", std::move(samples)},
          {"sum_pos", r.sum_pos},
          {"sum_neg", r.sum_neg},
          {"count_filtered", r.count_filtered},
          {"t_g", r.t_g}};
}

json eval_result_to_json(const EvalResult& r) {
  json curve = json::array();
  for (const auto& pt : r.curve) {
    curve.push_back({{"score", pt.score}, {"fppi", pt.fppi}, {"miss_rate", pt.miss_rate}});
  }
  return {{"mr", r.mr},
          {"images", r.images},
          {"detections", r.detections},
          {"tp", r.tp},
          {"fp", r.fp},
          {"fn", r.fn},
          {"fp_histogram", r.fp_histogram},
          {"curve", std::move(curve)}};
}

json sweep_to_json(std::span<const SweepRow> rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back({{"alpha", row.alpha},
                   {"beta", row.beta},
                   {"positives", row.positives},
                   {"filtered", row.filtered},
                   {"filtered_rate", row.filtered_rate},
                   {"mr", row.mr}});
  }
  return {{"rows", std::move(arr)}};
}

std::string fp_histogram_table(const FpHistogram& h) {
  static constexpr const char* kLabels[kIouIntervals] = {
      "[0.0, 0.2)", "[0.2, 0.4)", "[0.4, 0.6)", "[0.6, 0.8)", "[0.8, 1.0]"};
  std::ostringstream os;
  os << "IoU interval   FP\n";
  std::size_t total = 0;
  for (std::size_t k = 0; k < kIouIntervals; ++k) {
    os << std::left << std::setw(15) << kLabels[k] << h[k] << "\n";
    total += h[k];
  }
  os << std::left << std::setw(15) << "total" << total << "\n";
  return os.str();
}

std::string sweep_table(std::span<const SweepRow> rows) {
  std::ostringstream os;
  os << "alpha  beta  filtered_rate  MR\n" << std::fixed;
  for (const auto& r : rows) {
    os << std::setprecision(2) << std::setw(5) << r.alpha << "  " << std::setw(4) << r.beta
       << "  " << std::setprecision(4) << std::setw(13) << r.filtered_rate << "  "
       << r.mr << "\n";
  }
  return os.str();
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace crowdmatch
