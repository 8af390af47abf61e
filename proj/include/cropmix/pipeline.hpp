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

#ifndef CROPMIX_PIPELINE_HPP_INCLUDED
#define CROPMIX_PIPELINE_HPP_INCLUDED

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cropmix/config.hpp"
#include "cropmix/crop.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/mix.hpp"
#include "cropmix/resize.hpp"
#include "cropmix/rng.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

/**
 * Every random choice made for one sample. Together with the source image
 * and the config it determines the output exactly.
 */
struct MixPlan {
  std::uint64_t root_seed = 0;
  std::uint64_t sample_index = 0;
  std::size_t num_crops = 1;
  std::size_t src_channels = 0;
  std::size_t src_height = 0;
  std::size_t src_width = 0;
  std::vector<CropAssignment> crops; // ascending scale order; view id = position
  ChainPlan chain;
  std::vector<double> effective_weights; // mixup only, indexed by view id

  friend bool operator==(const MixPlan&, const MixPlan&) = default;
};

/// Accumulated wall time per pipeline stage, in seconds.
struct StageTimes {
  double decode = 0.0;
  double crop = 0.0;
  double resize = 0.0;
  double mix = 0.0;
  double encode = 0.0;

  double total() const noexcept { return decode + crop + resize + mix + encode; }
  StageTimes& operator+=(const StageTimes& o) noexcept {
    decode += o.decode;
    crop += o.crop;
    resize += o.resize;
    mix += o.mix;
    encode += o.encode;
    return *this;
  }
};

namespace detail {

class StageClock {
public:
  explicit StageClock(double* slot) noexcept
      : slot_(slot), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    if (slot_) {
      *slot_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                    .count();
    }
  }
  StageClock(const StageClock&) = delete;
  StageClock& operator=(const StageClock&) = delete;

private:
  double* slot_;
  std::chrono::steady_clock::time_point start_;
};

} // namespace detail

/**
 * Samples the plan for one sample without touching pixels.
 *
 * Randomness is consumed in a fixed order: N (only when the choice set has
 * more than one entry), the crops in ascending scale order, the view order,
 * then per step lambda / box / op parameters, then after-mix ops.
 */
inline MixPlan plan_sample(std::size_t channels, std::size_t height, std::size_t width,
                           const PipelineConfig& cfg, std::uint64_t root_seed,
                           std::uint64_t sample_index) {
  validate(cfg);
  if (channels == 0 || height == 0 || width == 0) {
    throw ParameterError("source image must be non-empty");
  }
  RngStream s = split(root_seed, sample_index);
  MixPlan plan;
  plan.root_seed = root_seed;
  plan.sample_index = sample_index;
  plan.src_channels = channels;
  plan.src_height = height;
  plan.src_width = width;

  if (cfg.baseline_rrc) {
    plan.num_crops = 1;
    plan.crops.push_back(
        {cfg.crop_scale, sample_crop(width, height, cfg.crop_scale, cfg.aspect_ratio, s)});
  } else {
    plan.num_crops = cfg.num_crops.size() > 1
                         ? cfg.num_crops[s.uniform_below(cfg.num_crops.size())]
                         : cfg.num_crops.front();
    if (cfg.single_scale) {
      for (std::size_t i = 0; i < plan.num_crops; ++i) {
        plan.crops.push_back({cfg.crop_scale, sample_crop(width, height, cfg.crop_scale,
                                                          cfg.aspect_ratio, s)});
      }
    } else {
      plan.crops = sample_n_crops(width, height, cfg.crop_scale, cfg.aspect_ratio,
                                  plan.num_crops, s);
    }
  }
  plan.chain = plan_chain(plan.num_crops, channels, cfg.resolution, cfg.resolution,
                          cfg.mix_mode, cfg.alpha_effective(plan.num_crops),
                          cfg.baseline_rrc ? std::vector<AugmentOp>{} : cfg.intermediate,
                          cfg.timing, s);
  if (cfg.mix_mode == MixMode::mixup) {
    plan.effective_weights = effective_weights(plan.chain);
  }
  return plan;
}

/// Throws ReplayError when `plan` cannot have come from (src shape, cfg).
inline void check_plan(const ImageTensor& src, const PipelineConfig& cfg,
                       const MixPlan& plan) {
  if (plan.src_channels != src.channels() || plan.src_height != src.height() ||
      plan.src_width != src.width()) {
    throw ReplayError("plan was sampled for a " + std::to_string(plan.src_channels) +
                      "x" + std::to_string(plan.src_height) + "x" +
                      std::to_string(plan.src_width) + " source, got " + src.shape_string());
  }
  if (plan.crops.size() != plan.num_crops || plan.chain.num_views != plan.num_crops) {
    throw ReplayError("plan records N = " + std::to_string(plan.num_crops) + " but " +
                      std::to_string(plan.crops.size()) + " crops and a chain over " +
                      std::to_string(plan.chain.num_views) + " views");
  }
  if (cfg.baseline_rrc) {
    if (plan.num_crops != 1) {
      throw ReplayError("baseline config cannot replay a multi-crop plan");
    }
  } else {
    bool allowed = false;
    for (auto n : cfg.num_crops) {
      allowed = allowed || n == plan.num_crops;
    }
    if (!allowed) {
      throw ReplayError("plan N = " + std::to_string(plan.num_crops) +
                        " is not in the config's num_crops set");
    }
  }
  if (plan.num_crops > 1 && plan.chain.mode != cfg.mix_mode) {
    throw ReplayError("plan mix mode differs from the config");
  }
  if (plan.num_crops > 1 && plan.chain.alpha != cfg.alpha_effective(plan.num_crops)) {
    throw ReplayError("plan alpha differs from the config's effective alpha");
  }
  for (const auto& c : plan.crops) {
    if (!c.rect.fits(src.width(), src.height())) {
      throw ReplayError("recorded crop rect does not fit the source");
    }
  }
  validate_chain(plan.chain);
}

/// Produces the output for a plan; consumes no randomness.
inline ImageTensor render(const ImageTensor& src, const PipelineConfig& cfg,
                          const MixPlan& plan, StageTimes* times = nullptr) {
  check_plan(src, cfg, plan);
  std::vector<ImageTensor> views;
  views.reserve(plan.crops.size());
  {
    detail::StageClock clock(times ? &times->resize : nullptr);
    for (const auto& c : plan.crops) {
      views.push_back(
          crop_and_resize(src, c.rect, cfg.resolution, cfg.resolution, cfg.interpolation));
    }
  }
  detail::StageClock clock(times ? &times->mix : nullptr);
  if (views.size() == 1) {
    return std::move(views.front());
  }
  return execute_chain(views, plan.chain);
}

/// Regenerates a recorded output.
inline ImageTensor replay(const ImageTensor& src, const PipelineConfig& cfg,
                          const MixPlan& plan) {
  return render(src, cfg, plan);
}

struct Sample {
  ImageTensor image;
  MixPlan plan;
};

/// One full application: output of shape (C, resolution, resolution).
inline Sample apply(const ImageTensor& src, const PipelineConfig& cfg,
                    std::uint64_t root_seed, std::uint64_t sample_index,
                    StageTimes* times = nullptr) {
  MixPlan plan;
  {
    detail::StageClock clock(times ? &times->crop : nullptr);
    plan = plan_sample(src.channels(), src.height(), src.width(), cfg, root_seed,
                       sample_index);
  }
  ImageTensor out = render(src, cfg, plan, times);
  return {std::move(out), std::move(plan)};
}

/**
 * A validated config bound to a root seed. Immutable and safe to share
 * across threads; this is the surface wrapped by host-language bindings.
 */
class Pipeline {
public:
  Pipeline(PipelineConfig cfg, std::uint64_t root_seed)
      : cfg_(std::move(cfg)), seed_(root_seed) {
    validate(cfg_);
  }

  static Pipeline from_file(const std::string& path, std::uint64_t root_seed) {
    return Pipeline(load_config(path), root_seed);
  }
  static Pipeline from_json(const nlohmann::json& mapping, std::uint64_t root_seed) {
    return Pipeline(config_from_json(mapping), root_seed);
  }

  const PipelineConfig& config() const noexcept { return cfg_; }
  std::uint64_t seed() const noexcept { return seed_; }

  Sample apply(const ImageTensor& src, std::uint64_t index) const {
    return cropmix::apply(src, cfg_, seed_, index);
  }

  MixPlan plan(const ImageTensor& src, std::uint64_t index) const {
    return plan_sample(src.channels(), src.height(), src.width(), cfg_, seed_, index);
  }

  /// Copies a host (C, H, W) float buffer into a validated tensor.
  static ImageTensor import_buffer(std::span<const float> values, std::size_t channels,
                                   std::size_t height, std::size_t width) {
    if (channels == 0 || height == 0 || width == 0) {
      throw ShapeError("shape: image dimensions must be >= 1");
    }
    if (values.size() != channels * height * width) {
      throw ShapeError("shape: buffer holds " + std::to_string(values.size()) +
                       " values, expected " + std::to_string(channels * height * width));
    }
    return ImageTensor(channels, height, width,
                       std::vector<float>(values.begin(), values.end()));
  }

private:
  PipelineConfig cfg_;
  std::uint64_t seed_;
};

} // namespace cropmix

#endif // CROPMIX_PIPELINE_HPP_INCLUDED
