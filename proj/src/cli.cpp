// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "crowdmatch/ablation.hpp"
#include "crowdmatch/config.hpp"
#include "crowdmatch/error.hpp"
#include "crowdmatch/scene_io.hpp"
#include "crowdmatch/synthgen.hpp"

namespace crowdmatch {

namespace {

using nlohmann::json;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha, beta, lambda1, lambda2, gamma_o;
  std::string out;
  bool legacy_cost = false;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  sink->set_pattern("[%l] %v");
  auto logger = std::make_shared<spdlog::logger>("crowdmatch", sink);
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CROWDMATCH_LOG")) {
    logger->set_level(spdlog::level::from_str(env));
  }
  return logger;
}

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) apply_config_file(cfg, o.config);
  if (o.seed) cfg.scene.seed = *o.seed;
  if (o.alpha) cfg.cost.alpha = *o.alpha;
  if (o.beta) cfg.cost.beta = *o.beta;
  if (o.lambda1) cfg.cost.lambda1 = *o.lambda1;
  if (o.lambda2) cfg.cost.lambda2 = *o.lambda2;
  if (o.gamma_o) cfg.loss.gamma_o = *o.gamma_o;
  if (o.legacy_cost) cfg.legacy_cost = true;
  cfg.finalize();
  return cfg;
}

// Writes to --out when given, otherwise to `out`.
void emit(const Overrides& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text(o.out, text);
  }
}

AssignMethod method_of(const RunConfig& cfg) {
  return cfg.legacy_cost ? AssignMethod::kLegacy : AssignMethod::kCgla;
}

int cmd_gen(const RunConfig& cfg, const Overrides& o, std::ostream& out,
            spdlog::logger& log) {
  std::vector<SceneImage> images;
  for (std::size_t i = 0; i < cfg.images; ++i) {
    SceneSpec spec = cfg.scene;
    spec.seed = cfg.scene.seed + i;
    const Scene scene = gen_scene(spec);
    SceneImage img;
    img.id = static_cast<std::int64_t>(i);
    img.width = spec.image_w;
    img.height = spec.image_h;
    img.gts = scene.gts;
    img.preds = gen_predictions(scene.gts, spec);
    log.debug("image {}: {} gts, {} pairs over {}, {} preds", i, img.gts.size(),
              scene.stats.pairs_over, spec.pair_iou, img.preds.size());
    images.push_back(std::move(img));
  }
  emit(o, out, dump_json(scenes_to_json(images)));
  log.info("generated {} images", images.size());
  return kExitOk;
}

int cmd_assign(const RunConfig& cfg, const Overrides& o, const std::string& scenes_path,
               const std::string& dets_out, std::ostream& out, spdlog::logger& log) {
  const auto images = read_scenes(scenes_path);
  const AssignMethod method = method_of(cfg);
  json per_image = json::array();
  std::vector<SceneImage> reweighted;
  std::size_t positives = 0, filtered = 0, negatives = 0;
  for (const auto& img : images) {
    Assignment a;
    if (!img.preds.empty()) {
      try {
        a = assign_image(img, method, cfg.cost, cfg.cgla);
      } catch (const Error& e) {
        throw Error(e.kind(), "image " + std::to_string(img.id) + ": " + e.what());
      }
    } else if (!img.gts.empty()) {
      throw Error(ErrorKind::kEmptyInput,
                  "image " + std::to_string(img.id) + " has ground truths but no predictions");
    }
    positives += a.positives.size();
    filtered += a.filtered.size();
    negatives += a.negatives.size();
    per_image.push_back(assignment_to_json(img.id, a));
    if (!dets_out.empty()) {
      SceneImage r = img;
      if (!img.preds.empty()) {
        r.preds = reweight_scores(ingest_samples(img.preds), img.gts, a, cfg.proxy);
      }
      reweighted.push_back(std::move(r));
    }
    log.debug("image {}: {} positives, {} filtered", img.id, a.positives.size(),
              a.filtered.size());
  }
  json doc = {{"schema", kSchemaVersion},
              {"method", method == AssignMethod::kCgla ? "cgla" : "legacy"},
              {"images", std::move(per_image)},
              {"summary",
               {{"positives", positives}, {"filtered", filtered}, {"negatives", negatives}}}};
  emit(o, out, dump_json(doc));
  if (!dets_out.empty()) write_text(dets_out, dump_json(scenes_to_json(reweighted)));
  const std::string summary = "images=" + std::to_string(images.size()) +
                              " positives=" + std::to_string(positives) +
                              " filtered=" + std::to_string(filtered) +
                              " negatives=" + std::to_string(negatives) + "\n";
  if (!o.out.empty()) out << summary;
  log.info("{}", summary.substr(0, summary.size() - 1));
  return kExitOk;
}

std::vector<ImageDetections> pair_by_id(const std::vector<SceneImage>& gts,
                                        const std::vector<SceneImage>& dets) {
  std::map<std::int64_t, const SceneImage*> by_id;
  for (const auto& d : dets) {
    if (!by_id.emplace(d.id, &d).second) {
      throw Error(ErrorKind::kConsistency, "duplicate image id " + std::to_string(d.id));
    }
  }
  std::vector<ImageDetections> out;
  for (const auto& g : gts) {
    ImageDetections img;
    img.gts = g.gts;
    if (auto it = by_id.find(g.id); it != by_id.end()) {
      img.dets = it->second->preds;
      by_id.erase(it);
    }
    out.push_back(std::move(img));
  }
  if (!by_id.empty()) {
    throw Error(ErrorKind::kConsistency,
                "detections for image " + std::to_string(by_id.begin()->first) +
                    " have no ground-truth entry");
  }
  return out;
}

int cmd_eval(const RunConfig& cfg, const Overrides& o, const std::string& dets_path,
             const std::string& gts_path, const std::string& baseline_path, bool table,
             std::ostream& out) {
  const auto gts = read_scenes(gts_path);
  const auto images = pair_by_id(gts, read_scenes(dets_path));
  const EvalResult result = evaluate(images, cfg.eval);
  json doc = eval_result_to_json(result);
  std::string text = "MR " + std::to_string(result.mr) + "\n" + fp_histogram_table(result.fp_histogram);
  if (!baseline_path.empty()) {
    const auto baseline = pair_by_id(gts, read_scenes(baseline_path));
    const FpComparison cmp = compare_fp_intervals(images, baseline, cfg.eval);
    doc["fp_comparison"] = {{"k", cmp.k}, {"dets", cmp.first}, {"baseline", cmp.second}};
    text += "equal-count comparison (top " + std::to_string(cmp.k) + ")\ndets\n" +
            fp_histogram_table(cmp.first) + "baseline\n" + fp_histogram_table(cmp.second);
  }
  emit(o, out, dump_json(doc));
  if (!o.out.empty() || table) out << text;
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const Overrides& o, const std::string& scenes_path,
              std::ostream& out) {
  const auto images = read_scenes(scenes_path);
  const auto rows = run_sweep(images, cfg.sweep_alpha, cfg.sweep_beta, cfg.cost, cfg.proxy,
                              cfg.eval);
  if (!o.out.empty()) write_text(o.out, dump_json(sweep_to_json(rows)));
  out << sweep_table(rows);
  return kExitOk;
}

int cmd_loss_report(const RunConfig& cfg, const Overrides& o, const std::string& scenes_path,
                    std::ostream& out) {
  const auto images = read_scenes(scenes_path);
  const AssignMethod method = method_of(cfg);
  json per_image = json::array();
  double sum_pos = 0.0, sum_neg = 0.0;
  GradientRatioTracker tracker;
  for (const auto& img : images) {
    if (img.preds.empty()) continue;
    const auto samples = ingest_samples(img.preds);
    const Assignment a = assign_image(img, method, cfg.cost, cfg.cgla);
    const LossReport r = batch_uafl(a, samples, img.gts, tracker, cfg.loss);
    sum_pos += r.sum_pos;
    sum_neg += r.sum_neg;
    per_image.push_back(loss_report_to_json(img.id, r));
  }
  json doc = {{"schema", kSchemaVersion},
              {"images", std::move(per_image)},
              {"sum_pos", sum_pos},
              {"sum_neg", sum_neg}};
  emit(o, out, dump_json(doc));
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitUsage;
    case ErrorKind::kOracleSize: return kExitInternal;
    default: return kExitData;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);

  CLI::App app{"Constraint-guided label assignment and crowded-pedestrian evaluation"};
  app.require_subcommand(1);
  // Subcommands copy this setting when created, so global flags may follow them.
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "Flat key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--alpha", o.alpha, "Center constraint fraction");
  app.add_option("--beta", o.beta, "Position constraint IoU threshold");
  app.add_option("--lambda1", o.lambda1, "Classification cost weight");
  app.add_option("--lambda2", o.lambda2, "GIoU and constraint cost weight");
  app.add_option("--gamma-o", o.gamma_o, "Anchor focusing exponent");
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_flag("--legacy-cost", o.legacy_cost, "Assign with the legacy L1 + GIoU cost");

  auto* gen = app.add_subcommand("gen", "Generate synthetic crowded scenes");
  std::optional<std::size_t> n_images, n_peds;
  gen->add_option("--images", n_images, "Number of images");
  gen->add_option("--n-pedestrians", n_peds, "Pedestrians per image");

  auto* assign = app.add_subcommand("assign", "Run label assignment on a scene file");
  std::string scenes_path, dets_out;
  assign->add_option("scenes", scenes_path, "Scene file")->required()->check(CLI::ExistingFile);
  assign->add_option("--emit-dets", dets_out,
                     "Also write predictions with proxy-reweighted scores");

  auto* eval = app.add_subcommand("eval", "Evaluate detections against ground truth");
  std::string dets_path, gts_path, baseline_path;
  bool table = false;
  eval->add_option("--dets", dets_path, "Detections (scene file with preds)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--gts", gts_path, "Ground truth (scene file with gts)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--baseline", baseline_path,
                   "Second detector for the equal-count FP comparison")
      ->check(CLI::ExistingFile);
  eval->add_flag("--table", table, "Print the text table even without --out");

  auto* sweep = app.add_subcommand("sweep", "Sweep alpha and beta on a scene file");
  std::vector<double> alphas, betas;
  sweep->add_option("scenes", scenes_path, "Scene file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--alphas", alphas, "Alpha grid")->delimiter(',');
  sweep->add_option("--betas", betas, "Beta grid")->delimiter(',');

  auto* loss = app.add_subcommand("loss-report", "Per-sample loss for every image");
  loss->add_option("scenes", scenes_path, "Scene file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    RunConfig cfg = resolve_config(o);
    if (n_images) cfg.images = *n_images;
    if (n_peds) cfg.scene.n_pedestrians = *n_peds;
    if (!alphas.empty()) cfg.sweep_alpha = alphas;
    if (!betas.empty()) cfg.sweep_beta = betas;

    if (*gen) return cmd_gen(cfg, o, out, *log);
    if (*assign) return cmd_assign(cfg, o, scenes_path, dets_out, out, *log);
    if (*eval) return cmd_eval(cfg, o, dets_path, gts_path, baseline_path, table, out);
    if (*sweep) return cmd_sweep(cfg, o, scenes_path, out);
    if (*loss) return cmd_loss_report(cfg, o, scenes_path, out);
    return kExitUsage;
  } catch (const Error& e) {
    log->error("{}", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    log->critical("internal error: {}", e.what());
    return kExitInternal;
  }
}

}  // namespace crowdmatch
