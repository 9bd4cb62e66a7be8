// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crowdmatch/ablation.hpp"
#include "crowdmatch/assignment.hpp"
#include "crowdmatch/costs.hpp"
#include "crowdmatch/evaluation.hpp"
#include "crowdmatch/loss.hpp"
#include "crowdmatch/synthgen.hpp"

namespace crowdmatch {

/// Everything a CLI run can be configured with.
struct RunConfig {
  CostConfig cost;
  LossConfig loss;
  CglaOptions cgla;
  EvalOptions eval;
  ProxyConfig proxy;
  SceneSpec scene;
  std::size_t images = 10;
  bool legacy_cost = false;
  std::vector<double> sweep_alpha{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> sweep_beta{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

  /// Copies shared parameters (beta) into every section and validates.
  void finalize();
};

/// Applies a flat `key = value` file (a TOML subset: numbers, booleans,
/// quoted strings, arrays of numbers, `#` comments) on top of `cfg`.
/// Unknown keys and malformed lines throw kConfig with the line number.
void apply_config_text(RunConfig& cfg, std::string_view text,
                       std::string_view source = "<config>");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Keys understood by apply_config_text, in documentation order.
std::vector<std::string> config_keys();

}  // namespace crowdmatch
