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

#ifndef CROPMIX_MANIFEST_HPP_INCLUDED
#define CROPMIX_MANIFEST_HPP_INCLUDED

// JSON schema of a plan (field names are stable):
//
//   {"sample_index", "root_seed", "num_crops", "source_shape": [C, H, W],
//    "crops": [{"scale": [lo, hi], "rect": [x, y, w, h]}, ...],
//    "mix_mode", "alpha", "view_order": [...],
//    "steps": [{"left", "right", "result", "lambda",
//               "box": null | {"a", "b", "w", "h", "rect", "effective_fraction"},
//               "augmented": null | id, "augments": [record, ...]}, ...],
//    "after": [record, ...], "effective_weights": [...]}
//
//   record: {"op", "placement", "target"} plus "permutation" for
//   channel_permute and "factors"/"order" for color_jitter.
//
// Reals are written in shortest round-trip form, so a parsed plan replays
// bit-exactly.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropmix/augment.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/mix.hpp"
#include "cropmix/pipeline.hpp"

namespace cropmix {

namespace detail {

inline nlohmann::json rect_json(const CropRect& r) { return {r.x, r.y, r.w, r.h}; }

inline CropRect rect_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw ReplayError("rect must be [x, y, w, h]");
  }
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>(), j[2].get<std::size_t>(),
          j[3].get<std::size_t>()};
}

inline nlohmann::json record_json(const AugmentRecord& r) {
  nlohmann::json j = {
      {"op", std::string(to_string(r.kind))},
      {"placement", r.placement == AugmentPlacement::before ? "before" : "after"},
      {"target", r.target},
  };
  if (r.kind == AugmentKind::channel_permute) {
    j["permutation"] = r.permutation;
  }
  if (r.kind == AugmentKind::color_jitter) {
    j["factors"] = r.jitter.factors;
    j["order"] = r.jitter.order;
  }
  return j;
}

inline AugmentRecord record_from(const nlohmann::json& j) {
  AugmentRecord r;
  r.kind = parse_augment_kind(j.at("op").get<std::string>());
  const auto placement = j.at("placement").get<std::string>();
  if (placement != "before" && placement != "after") {
    throw ReplayError("unknown augment placement \"" + placement + "\"");
  }
  r.placement = placement == "before" ? AugmentPlacement::before : AugmentPlacement::after;
  r.target = j.at("target").get<std::size_t>();
  if (r.kind == AugmentKind::channel_permute) {
    r.permutation = j.at("permutation").get<std::vector<std::size_t>>();
  }
  if (r.kind == AugmentKind::color_jitter) {
    r.jitter.factors = j.at("factors").get<std::array<double, 3>>();
    r.jitter.order = j.at("order").get<std::array<std::size_t, 3>>();
  }
  return r;
}

} // namespace detail

inline nlohmann::json plan_to_json(const MixPlan& plan) {
  using detail::rect_json;
  nlohmann::json crops = nlohmann::json::array();
  for (const auto& c : plan.crops) {
    crops.push_back({{"scale", {c.range.lo, c.range.hi}}, {"rect", rect_json(c.rect)}});
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : plan.chain.steps) {
    nlohmann::json box = nullptr;
    if (st.box) {
      box = {{"a", st.box->a},
             {"b", st.box->b},
             {"w", st.box->w},
             {"h", st.box->h},
             {"rect", rect_json(st.box->rect)},
             {"effective_fraction", st.box->effective_fraction}};
    }
    nlohmann::json augments = nlohmann::json::array();
    for (const auto& r : st.augments) {
      augments.push_back(detail::record_json(r));
    }
    steps.push_back({{"left", st.left},
                     {"right", st.right},
                     {"result", st.result},
                     {"lambda", st.lambda},
                     {"box", box},
                     {"augmented", st.augmented ? nlohmann::json(*st.augmented) : nlohmann::json(nullptr)},
                     {"augments", augments}});
  }
  nlohmann::json after = nlohmann::json::array();
  for (const auto& r : plan.chain.after) {
    after.push_back(detail::record_json(r));
  }
  return {{"sample_index", plan.sample_index},
          {"root_seed", plan.root_seed},
          {"num_crops", plan.num_crops},
          {"source_shape", {plan.src_channels, plan.src_height, plan.src_width}},
          {"crops", crops},
          {"mix_mode", std::string(to_string(plan.chain.mode))},
          {"alpha", plan.chain.alpha},
          {"view_order", plan.chain.view_order},
          {"steps", steps},
          {"after", after},
          {"effective_weights", plan.effective_weights}};
}

/// Inverse of plan_to_json. Structural problems raise ReplayError.
inline MixPlan plan_from_json(const nlohmann::json& j) {
  try {
    MixPlan plan;
    plan.sample_index = j.at("sample_index").get<std::uint64_t>();
    plan.root_seed = j.at("root_seed").get<std::uint64_t>();
    plan.num_crops = j.at("num_crops").get<std::size_t>();
    const auto& shape = j.at("source_shape");
    if (!shape.is_array() || shape.size() != 3) {
      throw ReplayError("source_shape must be [C, H, W]");
    }
    plan.src_channels = shape[0].get<std::size_t>();
    plan.src_height = shape[1].get<std::size_t>();
    plan.src_width = shape[2].get<std::size_t>();
    for (const auto& c : j.at("crops")) {
      const auto& sc = c.at("scale");
      plan.crops.push_back(
          {{sc.at(0).get<double>(), sc.at(1).get<double>()}, detail::rect_from(c.at("rect"))});
    }
    plan.chain.num_views = plan.num_crops;
    plan.chain.mode = parse_mix_mode(j.at("mix_mode").get<std::string>());
    plan.chain.alpha = j.at("alpha").get<double>();
    plan.chain.view_order = j.at("view_order").get<std::vector<std::size_t>>();
    for (const auto& sj : j.at("steps")) {
      MixStep st;
      st.left = sj.at("left").get<std::size_t>();
      st.right = sj.at("right").get<std::size_t>();
      st.result = sj.at("result").get<std::size_t>();
      st.lambda = sj.at("lambda").get<double>();
      st.mode = plan.chain.mode;
      if (!sj.at("box").is_null()) {
        const auto& bj = sj.at("box");
        MixBox box;
        box.a = bj.at("a").get<double>();
        box.b = bj.at("b").get<double>();
        box.w = bj.at("w").get<double>();
        box.h = bj.at("h").get<double>();
        box.rect = detail::rect_from(bj.at("rect"));
        box.effective_fraction = bj.at("effective_fraction").get<double>();
        st.box = box;
      }
      if (!sj.at("augmented").is_null()) {
        st.augmented = sj.at("augmented").get<std::size_t>();
      }
      for (const auto& r : sj.at("augments")) {
        st.augments.push_back(detail::record_from(r));
      }
      plan.chain.steps.push_back(std::move(st));
    }
    for (const auto& r : j.at("after")) {
      plan.chain.after.push_back(detail::record_from(r));
    }
    plan.effective_weights = j.at("effective_weights").get<std::vector<double>>();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ReplayError(std::string("malformed plan: ") + e.what());
  } catch (const ParameterError& e) {
    throw ReplayError(std::string("malformed plan: ") + e.what());
  }
}

/// Everything needed to regenerate one persisted sample.
struct SampleManifest {
  std::string source;
  std::uint64_t root_seed = 0;
  std::uint64_t sample_index = 0;
  std::string config_digest;
  MixPlan plan;
  std::vector<std::string> outputs;
};

inline nlohmann::json manifest_to_json(const SampleManifest& m) {
  return {{"source", m.source},
          {"root_seed", m.root_seed},
          {"sample_index", m.sample_index},
          {"config_digest", m.config_digest},
          {"plan", plan_to_json(m.plan)},
          {"outputs", m.outputs}};
}

inline SampleManifest manifest_from_json(const nlohmann::json& j) {
  try {
    SampleManifest m;
    m.source = j.at("source").get<std::string>();
    m.root_seed = j.at("root_seed").get<std::uint64_t>();
    m.sample_index = j.at("sample_index").get<std::uint64_t>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.plan = plan_from_json(j.at("plan"));
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ReplayError(std::string("malformed manifest: ") + e.what());
  }
}

} // namespace cropmix

#endif // CROPMIX_MANIFEST_HPP_INCLUDED
