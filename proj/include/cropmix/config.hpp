// Copyright (c) 2026, The cropmix Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CROPMIX_CONFIG_HPP_INCLUDED
#define CROPMIX_CONFIG_HPP_INCLUDED

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropmix/augment.hpp"
#include "cropmix/crop.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/mix.hpp"
#include "cropmix/resize.hpp"

namespace cropmix {

/// Declarative description of one pipeline. Defaults reproduce the
/// ImageNet setting: N in {2,3,4}, mixup, channel permutation before mixing.
struct PipelineConfig {
  CropScaleRange crop_scale{0.01, 1.0};
  AspectRatioRange aspect_ratio{3.0 / 4.0, 4.0 / 3.0};
  std::vector<std::size_t> num_crops{2, 3, 4};
  bool single_scale = false;
  MixMode mix_mode = MixMode::mixup;
  double alpha_base = 0.4;
  bool scale_alpha_by_n = true;
  std::size_t resolution = 224;
  InterpolationMode interpolation = InterpolationMode::bilinear;
  std::vector<AugmentOp> intermediate{AugmentOp{AugmentKind::channel_permute, {}}};
  AugmentTiming timing = AugmentTiming::before;
  bool baseline_rrc = false;

  /// Beta shape used for every step of a chain over n views.
  double alpha_effective(std::size_t n) const noexcept {
    return scale_alpha_by_n ? alpha_base / static_cast<double>(n) : alpha_base;
  }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

inline void validate(const PipelineConfig& cfg) {
  try {
    validate_scale_range(cfg.crop_scale);
    validate_ratio_range(cfg.aspect_ratio);
    for (const auto& op : cfg.intermediate) {
      validate_jitter(op.jitter);
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (cfg.num_crops.empty()) {
    throw ConfigError("num_crops choice set must be non-empty");
  }
  for (auto n : cfg.num_crops) {
    if (n < 1) {
      throw ConfigError("num_crops entries must be >= 1");
    }
  }
  if (cfg.resolution < 1) {
    throw ConfigError("resolution must be >= 1");
  }
  if (!(cfg.alpha_base > 0.0) || !std::isfinite(cfg.alpha_base)) {
    throw ConfigError("alpha_base must be positive");
  }
}

namespace detail {

inline std::string op_to_string(const AugmentOp& op) {
  std::string s(to_string(op.kind));
  if (op.kind == AugmentKind::color_jitter) {
    nlohmann::json j = {op.jitter.brightness, op.jitter.contrast, op.jitter.saturation};
    std::string args = j.dump();
    s += "(" + args.substr(1, args.size() - 2) + ")";
  }
  return s;
}

/// "name" or "color_jitter(b, c, s)".
inline AugmentOp parse_op(const std::string& text) {
  AugmentOp op;
  const auto paren = text.find('(');
  op.kind = parse_augment_kind(text.substr(0, paren));
  if (paren == std::string::npos) {
    return op;
  }
  if (op.kind != AugmentKind::color_jitter || text.back() != ')') {
    throw ConfigError("malformed intermediate op \"" + text + "\"");
  }
  nlohmann::json args;
  try {
    args = nlohmann::json::parse("[" + text.substr(paren + 1, text.size() - paren - 2) + "]");
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("malformed color_jitter strengths in \"" + text + "\"");
  }
  if (args.size() != 3 || !args[0].is_number() || !args[1].is_number() ||
      !args[2].is_number()) {
    throw ConfigError("color_jitter takes three strengths (brightness, contrast, saturation)");
  }
  op.jitter = {args[0].get<double>(), args[1].get<double>(), args[2].get<double>()};
  return op;
}

template <class T> T get_as(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key \"" + key + "\" has the wrong type: " + v.dump());
  }
}

inline std::size_t get_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key \"" + key + "\" must be a non-negative integer, got " +
                      v.dump());
  }
  return v.get<std::size_t>();
}

inline std::pair<double, double> get_pair(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("config key \"" + key + "\" must be a two-element numeric list");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

inline std::string get_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) {
    throw ConfigError("config key \"" + key + "\" must be a string, got " + v.dump());
  }
  return v.get<std::string>();
}

template <class F> auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

} // namespace detail

/**
 * Builds a config from a JSON object keyed like the text format. Missing keys
 * keep their defaults; unknown keys are errors. When mix_mode is cutmix and
 * neither alpha key is given, alpha defaults to 1.0 without scaling by N.
 */
inline PipelineConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config document must be a mapping");
  }
  static const std::set<std::string> kKeys = {
      "crop_scale", "aspect_ratio", "num_crops", "single_scale",
      "mix_mode", "alpha_base", "scale_alpha_by_n", "resolution",
      "interpolation", "intermediate", "timing", "baseline_rrc"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }

  PipelineConfig cfg;
  using namespace detail;
  if (doc.contains("crop_scale")) {
    auto [lo, hi] = get_pair(doc["crop_scale"], "crop_scale");
    cfg.crop_scale = {lo, hi};
  }
  if (doc.contains("aspect_ratio")) {
    auto [lo, hi] = get_pair(doc["aspect_ratio"], "aspect_ratio");
    cfg.aspect_ratio = {lo, hi};
  }
  if (doc.contains("num_crops")) {
    const auto& v = doc["num_crops"];
    cfg.num_crops.clear();
    if (v.is_array()) {
      for (const auto& n : v) {
        cfg.num_crops.push_back(get_count(n, "num_crops"));
      }
    } else {
      cfg.num_crops.push_back(get_count(v, "num_crops"));
    }
  }
  if (doc.contains("single_scale")) {
    cfg.single_scale = get_as<bool>(doc["single_scale"], "single_scale");
  }
  if (doc.contains("mix_mode")) {
    cfg.mix_mode = as_config_error(
        [&] { return parse_mix_mode(get_string(doc["mix_mode"], "mix_mode")); });
  }
  const bool alpha_given = doc.contains("alpha_base") || doc.contains("scale_alpha_by_n");
  if (cfg.mix_mode == MixMode::cutmix && !alpha_given) {
    cfg.alpha_base = 1.0;
    cfg.scale_alpha_by_n = false;
  }
  if (doc.contains("alpha_base")) {
    if (!doc["alpha_base"].is_number()) {
      throw ConfigError("config key \"alpha_base\" must be a number");
    }
    cfg.alpha_base = doc["alpha_base"].get<double>();
  }
  if (doc.contains("scale_alpha_by_n")) {
    cfg.scale_alpha_by_n = get_as<bool>(doc["scale_alpha_by_n"], "scale_alpha_by_n");
  }
  if (doc.contains("resolution")) {
    cfg.resolution = get_count(doc["resolution"], "resolution");
  }
  if (doc.contains("interpolation")) {
    cfg.interpolation = as_config_error([&] {
      return parse_interpolation(get_string(doc["interpolation"], "interpolation"));
    });
  }
  if (doc.contains("intermediate")) {
    const auto& v = doc["intermediate"];
    if (!v.is_array()) {
      throw ConfigError("config key \"intermediate\" must be a list of op names");
    }
    cfg.intermediate.clear();
    for (const auto& item : v) {
      const auto name = get_string(item, "intermediate");
      cfg.intermediate.push_back(as_config_error([&] { return parse_op(name); }));
    }
  }
  if (doc.contains("timing")) {
    cfg.timing = as_config_error(
        [&] { return parse_timing(get_string(doc["timing"], "timing")); });
  }
  if (doc.contains("baseline_rrc")) {
    cfg.baseline_rrc = get_as<bool>(doc["baseline_rrc"], "baseline_rrc");
  }
  validate(cfg);
  return cfg;
}

/**
 * Parses the flat `key = value` text format. Values are JSON literals
 * (numbers, booleans, quoted strings, lists). Blank lines and lines starting
 * with '#' are ignored.
 */
inline PipelineConfig parse_config(std::string_view text) {
  nlohmann::json doc = nlohmann::json::object();
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    if (doc.contains(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key \"" +
                        key + "\"");
    }
    try {
      doc[key] = nlohmann::json::parse(value);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config line " + std::to_string(lineno) + ": cannot parse value " +
                        value);
    }
  }
  return config_from_json(doc);
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Canonical JSON form; keys sorted, every field explicit.
inline nlohmann::json to_json(const PipelineConfig& cfg) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : cfg.intermediate) {
    ops.push_back(detail::op_to_string(op));
  }
  return {
      {"crop_scale", {cfg.crop_scale.lo, cfg.crop_scale.hi}},
      {"aspect_ratio", {cfg.aspect_ratio.lo, cfg.aspect_ratio.hi}},
      {"num_crops", cfg.num_crops},
      {"single_scale", cfg.single_scale},
      {"mix_mode", std::string(to_string(cfg.mix_mode))},
      {"alpha_base", cfg.alpha_base},
      {"scale_alpha_by_n", cfg.scale_alpha_by_n},
      {"resolution", cfg.resolution},
      {"interpolation", std::string(to_string(cfg.interpolation))},
      {"intermediate", ops},
      {"timing", std::string(to_string(cfg.timing))},
      {"baseline_rrc", cfg.baseline_rrc},
  };
}

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
inline std::string config_digest(const PipelineConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace cropmix

#endif // CROPMIX_CONFIG_HPP_INCLUDED
