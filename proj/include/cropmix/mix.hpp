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

#ifndef CROPMIX_MIX_HPP_INCLUDED
#define CROPMIX_MIX_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cropmix/augment.hpp"
#include "cropmix/crop.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/rng.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

enum class MixMode { mixup, cutmix };

inline std::string_view to_string(MixMode m) noexcept {
  return m == MixMode::mixup ? "mixup" : "cutmix";
}

inline MixMode parse_mix_mode(std::string_view s) {
  if (s == "mixup") return MixMode::mixup;
  if (s == "cutmix") return MixMode::cutmix;
  throw ParameterError("unknown mix mode \"" + std::string(s) +
                       "\" (expected mixup|cutmix)");
}

inline void validate_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ParameterError("mixing weight must lie in [0, 1], got " +
                         std::to_string(lambda));
  }
}

/// Z = lambda * X + (1 - lambda) * Y, per pixel.
namespace detail {

// x <- lambda * x + (1 - lambda) * y, elementwise.
inline void mixup_inplace(ImageTensor& x, const ImageTensor& y, double lambda) {
  auto xs = x.data();
  const auto ys = y.data();
  const double rest = 1.0 - lambda;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = lambda * static_cast<double>(xs[i]) + rest * static_cast<double>(ys[i]);
    xs[i] = std::clamp(static_cast<float>(v), 0.0f, 1.0f);
  }
}

// Copies the pixels of `r` from y into x.
inline void paste_box(ImageTensor& x, const ImageTensor& y, const CropRect& r) {
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (std::size_t row = r.y; row < r.y + r.h; ++row) {
      const std::size_t at = row * x.width() + r.x;
      std::copy_n(y.plane(c).begin() + at, r.w, x.plane(c).begin() + at);
    }
  }
}

} // namespace detail

inline ImageTensor mixup(const ImageTensor& x, const ImageTensor& y, double lambda) {
  require_same_shape(x, y, "mixup");
  validate_lambda(lambda);
  ImageTensor z = x;
  detail::mixup_inplace(z, y, lambda);
  return z;
}

/**
 * CutMix box. (a, b) is the centre and (w, h) = (W sqrt(lambda), H sqrt(lambda))
 * the unclamped size. `rect` is the box with edges rounded half away from
 * zero, intersected with the frame.
 */
struct MixBox {
  double a = 0.0;
  double b = 0.0;
  double w = 0.0;
  double h = 0.0;
  CropRect rect;
  double effective_fraction = 0.0;

  friend bool operator==(const MixBox&, const MixBox&) = default;
};

/// Builds the clamped box for a given centre; no randomness.
inline MixBox make_cutmix_box(std::size_t frame_w, std::size_t frame_h,
                              double lambda, double a, double b) {
  validate_lambda(lambda);
  MixBox box;
  box.a = a;
  box.b = b;
  box.w = static_cast<double>(frame_w) * std::sqrt(lambda);
  box.h = static_cast<double>(frame_h) * std::sqrt(lambda);
  auto edge = [](double v, std::size_t limit) {
    return static_cast<std::size_t>(
        std::clamp(std::round(v), 0.0, static_cast<double>(limit)));
  };
  const std::size_t x0 = edge(a - box.w / 2.0, frame_w);
  const std::size_t x1 = edge(a + box.w / 2.0, frame_w);
  const std::size_t y0 = edge(b - box.h / 2.0, frame_h);
  const std::size_t y1 = edge(b + box.h / 2.0, frame_h);
  box.rect = CropRect{x0, y0, x1 - x0, y1 - y0};
  box.effective_fraction = static_cast<double>(box.rect.area()) /
                           (static_cast<double>(frame_w) * static_cast<double>(frame_h));
  return box;
}

/// Centre drawn uniformly over the frame.
inline MixBox sample_cutmix_box(std::size_t frame_w, std::size_t frame_h,
                                double lambda, RngStream& s) {
  validate_lambda(lambda);
  const double a = sample_uniform_range(s, 0.0, static_cast<double>(frame_w));
  const double b = sample_uniform_range(s, 0.0, static_cast<double>(frame_h));
  return make_cutmix_box(frame_w, frame_h, lambda, a, b);
}

/// Z = M * X + (1 - M) * Y with M = 0 inside the box: box pixels come from Y.
inline ImageTensor cutmix(const ImageTensor& x, const ImageTensor& y, const MixBox& box) {
  require_same_shape(x, y, "cutmix");
  const CropRect& r = box.rect;
  if (r.x + r.w > x.width() || r.y + r.h > x.height()) {
    throw BoundsError("cutmix box exceeds the frame");
  }
  ImageTensor z = x;
  detail::paste_box(z, y, r);
  return z;
}

/**
 * One pairwise mix of the chain. Ids 0..N-1 are views; step k (0-based)
 * produces id N + k. `left` carries weight lambda (mixup) or keeps the
 * pixels outside the box (cutmix).
 */
struct MixStep {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t result = 0;
  double lambda = 0.0;
  MixMode mode = MixMode::mixup;
  std::optional<MixBox> box;
  /// Operand that received the before-mix ops, if any ran.
  std::optional<std::size_t> augmented;
  std::vector<AugmentRecord> augments;

  /// Share of the output taken from the left operand.
  double left_weight() const noexcept {
    return mode == MixMode::cutmix && box ? 1.0 - box->effective_fraction : lambda;
  }

  friend bool operator==(const MixStep&, const MixStep&) = default;
};

/// The complete sampled randomness of one mixing chain.
struct ChainPlan {
  std::size_t num_views = 0;
  MixMode mode = MixMode::mixup;
  double alpha = 1.0;
  std::vector<std::size_t> view_order;
  std::vector<MixStep> steps;
  std::vector<AugmentRecord> after;

  std::size_t final_id() const noexcept {
    return num_views <= 1 ? 0 : 2 * num_views - 2;
  }

  friend bool operator==(const ChainPlan&, const ChainPlan&) = default;
};

/**
 * Samples a chain over `num_views` frames of frame_w x frame_h.
 *
 * Draw order: view order, then per step lambda, the box (cutmix) and the
 * before-mix op parameters, then the after-mix op parameters. Before-mix ops
 * go to the operand with the smaller share: the right operand when the left
 * share is >= 0.5, else the left one. A single view yields no steps and no ops.
 */
inline ChainPlan plan_chain(std::size_t num_views, std::size_t channels,
                            std::size_t frame_w, std::size_t frame_h, MixMode mode,
                            double alpha, const std::vector<AugmentOp>& ops,
                            AugmentTiming timing, RngStream& s) {
  if (num_views == 0) {
    throw ParameterError("mixing chain needs at least one view");
  }
  if (!(alpha > 0.0)) {
    throw ParameterError("mixing alpha must be positive");
  }
  ChainPlan plan;
  plan.num_views = num_views;
  plan.mode = mode;
  plan.alpha = alpha;
  plan.view_order = sample_permutation(num_views, s);
  if (num_views == 1) {
    return plan;
  }
  const bool before = timing != AugmentTiming::after;
  const bool after = timing != AugmentTiming::before;
  std::size_t running = plan.view_order[0];
  for (std::size_t k = 1; k < num_views; ++k) {
    MixStep step;
    step.left = running;
    step.right = plan.view_order[k];
    step.result = num_views + k - 1;
    step.mode = mode;
    step.lambda = sample_beta(s, BetaParams{alpha});
    if (mode == MixMode::cutmix) {
      step.box = sample_cutmix_box(frame_w, frame_h, step.lambda, s);
    }
    if (before && !ops.empty()) {
      const std::size_t target = step.left_weight() >= 0.5 ? step.right : step.left;
      step.augmented = target;
      for (const auto& op : ops) {
        step.augments.push_back(
            sample_augment(op, channels, AugmentPlacement::before, target, s));
      }
    }
    running = step.result;
    plan.steps.push_back(std::move(step));
  }
  if (after) {
    for (const auto& op : ops) {
      plan.after.push_back(
          sample_augment(op, channels, AugmentPlacement::after, plan.final_id(), s));
    }
  }
  return plan;
}

/// Structural checks shared by execution and replay.
inline void validate_chain(const ChainPlan& plan) {
  const std::size_t n = plan.num_views;
  if (n == 0) {
    throw ReplayError("chain has no views");
  }
  if (plan.view_order.size() != n) {
    throw ReplayError("chain view order has " + std::to_string(plan.view_order.size()) +
                      " entries for " + std::to_string(n) + " views");
  }
  std::vector<char> seen(n, 0);
  for (auto v : plan.view_order) {
    if (v >= n || seen[v]) {
      throw ReplayError("chain view order is not a permutation");
    }
    seen[v] = 1;
  }
  if (plan.steps.size() != n - 1) {
    throw ReplayError("chain over " + std::to_string(n) + " views records " +
                      std::to_string(plan.steps.size()) + " steps (expected " +
                      std::to_string(n - 1) + ")");
  }
  std::size_t running = plan.view_order[0];
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const auto& st = plan.steps[k];
    if (st.left != running || st.right != plan.view_order[k + 1] ||
        st.result != n + k) {
      throw ReplayError("chain step " + std::to_string(k) + " operands are inconsistent");
    }
    if (st.mode != plan.mode || st.box.has_value() != (plan.mode == MixMode::cutmix)) {
      throw ReplayError("chain step " + std::to_string(k) + " mode is inconsistent");
    }
    if (!(st.lambda >= 0.0 && st.lambda <= 1.0)) {
      throw ReplayError("chain step " + std::to_string(k) + " lambda out of range");
    }
    running = st.result;
  }
  if (n == 1 && !plan.after.empty()) {
    throw ReplayError("single-view chain cannot carry ops");
  }
}

/// Runs a sampled chain over concrete views; no randomness consumed.
inline ImageTensor execute_chain(const std::vector<ImageTensor>& views,
                                 const ChainPlan& plan) {
  if (views.empty()) {
    throw ParameterError("mixing chain needs at least one view");
  }
  for (const auto& v : views) {
    require_same_shape(views.front(), v, "mix chain");
  }
  validate_chain(plan);
  if (plan.num_views != views.size()) {
    throw ReplayError("chain plan covers " + std::to_string(plan.num_views) +
                      " views but " + std::to_string(views.size()) + " were given");
  }
  if (views.size() == 1) {
    return views.front();
  }
  const std::size_t n = views.size();
  ImageTensor running = views[plan.view_order[0]];
  for (const auto& st : plan.steps) {
    // The incoming view is only copied when an op rewrites it.
    const ImageTensor* right = &views[st.right];
    ImageTensor augmented;
    for (const auto& rec : st.augments) {
      if (rec.target == st.left) {
        running = apply_augment(running, rec);
      } else if (rec.target == st.right) {
        augmented = apply_augment(*right, rec);
        right = &augmented;
      } else {
        throw ReplayError("augment target " + std::to_string(rec.target) +
                          " is not an operand of its step");
      }
    }
    if (st.box && (st.box->rect.x + st.box->rect.w > views.front().width() ||
                   st.box->rect.y + st.box->rect.h > views.front().height())) {
      throw ReplayError("recorded cutmix box exceeds the frame");
    }
    if (st.mode == MixMode::mixup) {
      detail::mixup_inplace(running, *right, st.lambda);
    } else {
      detail::paste_box(running, *right, st.box->rect);
    }
  }
  for (const auto& rec : plan.after) {
    if (rec.target != 2 * n - 2) {
      throw ReplayError("after-mix op does not target the final image");
    }
    running = apply_augment(running, rec);
  }
  return running;
}

/// Samples and runs a chain. Returns the mixed image and its trace.
inline std::pair<ImageTensor, ChainPlan>
mix_chain(const std::vector<ImageTensor>& views, MixMode mode, double alpha,
          const std::vector<AugmentOp>& ops, AugmentTiming timing, RngStream& s) {
  if (views.empty()) {
    throw ParameterError("mixing chain needs at least one view");
  }
  for (const auto& v : views) {
    require_same_shape(views.front(), v, "mix chain");
  }
  const auto& f = views.front();
  auto plan = plan_chain(views.size(), f.channels(), f.width(), f.height(), mode,
                         alpha, ops, timing, s);
  auto out = execute_chain(views, plan);
  return {std::move(out), std::move(plan)};
}

/**
 * Convex coefficient of each view in a mixup chain: the running intermediate
 * is scaled by lambda at every step and the incoming view gets 1 - lambda.
 */
inline std::vector<double> effective_weights(const ChainPlan& plan) {
  std::vector<double> w(plan.num_views, 0.0);
  if (plan.num_views == 0) {
    return w;
  }
  w[plan.view_order[0]] = 1.0;
  for (const auto& st : plan.steps) {
    for (auto& v : w) {
      v *= st.lambda;
    }
    w[st.right] = 1.0 - st.lambda;
  }
  return w;
}

} // namespace cropmix

#endif // CROPMIX_MIX_HPP_INCLUDED
