// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <variant>

#include "crowdmatch/error.hpp"

namespace crowdmatch {

namespace {

using Value = std::variant<double, bool, std::string, std::vector<double>>;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  if (s == "inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_value(std::string_view s, Value& out) {
  s = trim(s);
  if (s == "true" || s == "false") {
    out = s == "true";
    return true;
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    out = std::string(s.substr(1, s.size() - 2));
    return true;
  }
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    std::vector<double> values;
    std::string_view body = trim(s.substr(1, s.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      double v = 0.0;
      if (!parse_number(body.substr(0, comma), v)) return false;
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    out = std::move(values);
    return true;
  }
  double v = 0.0;
  if (!parse_number(s, v)) return false;
  out = v;
  return true;
}

using Setter = std::function<void(RunConfig&, const Value&)>;

template <typename Get>
Setter number_setter(Get get) {
  return [get](RunConfig& c, const Value& v) {
    if (!std::holds_alternative<double>(v)) throw std::invalid_argument("expected a number");
    get(c) = std::get<double>(v);
  };
}

template <typename Get>
Setter count_setter(Get get) {
  return [get](RunConfig& c, const Value& v) {
    const double* d = std::get_if<double>(&v);
    if (!d || *d < 0.0 || std::floor(*d) != *d) {
      throw std::invalid_argument("expected a non-negative integer");
    }
    get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(*d);
  };
}

template <typename Get>
Setter flag_setter(Get get) {
  return [get](RunConfig& c, const Value& v) {
    if (!std::holds_alternative<bool>(v)) throw std::invalid_argument("expected true or false");
    get(c) = std::get<bool>(v);
  };
}

template <typename Get>
Setter list_setter(Get get) {
  return [get](RunConfig& c, const Value& v) {
    if (!std::holds_alternative<std::vector<double>>(v)) {
      throw std::invalid_argument("expected an array of numbers");
    }
    get(c) = std::get<std::vector<double>>(v);
  };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"alpha", number_setter([](RunConfig& c) -> double& { return c.cost.alpha; })},
      {"beta", number_setter([](RunConfig& c) -> double& { return c.cost.beta; })},
      {"lambda1", number_setter([](RunConfig& c) -> double& { return c.cost.lambda1; })},
      {"lambda2", number_setter([](RunConfig& c) -> double& { return c.cost.lambda2; })},
      {"focal_alpha", number_setter([](RunConfig& c) -> double& { return c.cost.focal_alpha; })},
      {"focal_gamma", number_setter([](RunConfig& c) -> double& { return c.cost.focal_gamma; })},
      {"constraint_cost", flag_setter([](RunConfig& c) -> bool& { return c.cgla.constraint_cost; })},
      {"post_filter", flag_setter([](RunConfig& c) -> bool& { return c.cgla.post_filter; })},
      {"legacy_cost", flag_setter([](RunConfig& c) -> bool& { return c.legacy_cost; })},
      {"gamma_o", number_setter([](RunConfig& c) -> double& { return c.loss.gamma_o; })},
      {"gamma_clamp_low", number_setter([](RunConfig& c) -> double& { return c.loss.clamp_low; })},
      {"gamma_clamp_high", number_setter([](RunConfig& c) -> double& { return c.loss.clamp_high; })},
      {"gamma_min", number_setter([](RunConfig& c) -> double& { return c.loss.gamma_min; })},
      {"iou_threshold", number_setter([](RunConfig& c) -> double& { return c.eval.iou_threshold; })},
      {"mr_points", count_setter([](RunConfig& c) -> std::size_t& { return c.eval.mr_points; })},
      {"proxy_step", number_setter([](RunConfig& c) -> double& { return c.proxy.step; })},
      {"seed", count_setter([](RunConfig& c) -> std::uint64_t& { return c.scene.seed; })},
      {"images", count_setter([](RunConfig& c) -> std::size_t& { return c.images; })},
      {"image_width", number_setter([](RunConfig& c) -> double& { return c.scene.image_w; })},
      {"image_height", number_setter([](RunConfig& c) -> double& { return c.scene.image_h; })},
      {"n_pedestrians", count_setter([](RunConfig& c) -> std::size_t& { return c.scene.n_pedestrians; })},
      {"target_pair_iou_rate", number_setter([](RunConfig& c) -> double& { return c.scene.target_pair_iou_rate; })},
      {"aspect_ratio", number_setter([](RunConfig& c) -> double& { return c.scene.aspect_ratio; })},
      {"hit_prob", number_setter([](RunConfig& c) -> double& { return c.scene.prediction.hit_prob; })},
      {"occluded_hit_prob", number_setter([](RunConfig& c) -> double& { return c.scene.prediction.occluded_hit_prob; })},
      {"center_jitter", number_setter([](RunConfig& c) -> double& { return c.scene.prediction.center_jitter; })},
      {"scale_jitter", number_setter([](RunConfig& c) -> double& { return c.scene.prediction.scale_jitter; })},
      {"score_noise", number_setter([](RunConfig& c) -> double& { return c.scene.prediction.score_noise; })},
      {"clutter", count_setter([](RunConfig& c) -> std::size_t& { return c.scene.prediction.clutter; })},
      {"sweep_alpha", list_setter([](RunConfig& c) -> std::vector<double>& { return c.sweep_alpha; })},
      {"sweep_beta", list_setter([](RunConfig& c) -> std::vector<double>& { return c.sweep_beta; })},
  };
  return table;
}

}  // namespace

void RunConfig::finalize() {
  loss.beta = cost.beta;
  cost.validate();
  loss.validate();
  eval.validate();
  scene.validate();
  if (!(proxy.step >= 0.0 && proxy.step <= 1.0)) {
    throw Error(ErrorKind::kConfig, "proxy_step must lie in [0, 1]");
  }
  if (sweep_alpha.empty() || sweep_beta.empty()) {
    throw Error(ErrorKind::kConfig, "sweep grids must be non-empty");
  }
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto fail = [&](const std::string& msg) {
      std::ostringstream os;
      os << source << ":" << line_no << ": " << msg;
      throw Error(ErrorKind::kConfig, os.str());
    };
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    Value value;
    if (!parse_value(line.substr(eq + 1), value)) fail("cannot parse value for '" + key + "'");
    bool known = false;
    for (const auto& [name, set] : setters()) {
      if (name != key) continue;
      known = true;
      try {
        set(cfg, value);
      } catch (const std::invalid_argument& e) {
        fail(key + ": " + e.what());
      }
    }
    if (!known) fail("unknown key '" + key + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path.string());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, _] : setters()) keys.push_back(name);
  return keys;
}

}  // namespace crowdmatch
