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

#ifndef CROPMIX_AUGMENT_HPP_INCLUDED
#define CROPMIX_AUGMENT_HPP_INCLUDED

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cropmix/errors.hpp"
#include "cropmix/rng.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

enum class AugmentKind { channel_permute, hflip, vflip, color_jitter };
enum class AugmentTiming { before, after, both };
enum class FlipAxis { horizontal, vertical };

/// Max relative deltas; each factor is drawn from [1 - d, 1 + d].
struct JitterStrength {
  double brightness = 0.4;
  double contrast = 0.4;
  double saturation = 0.4;

  friend bool operator==(const JitterStrength&, const JitterStrength&) = default;
};

struct AugmentOp {
  AugmentKind kind = AugmentKind::channel_permute;
  JitterStrength jitter{};

  friend bool operator==(const AugmentOp&, const AugmentOp&) = default;
};

inline std::string_view to_string(AugmentKind k) noexcept {
  switch (k) {
  case AugmentKind::channel_permute: return "channel_permute";
  case AugmentKind::hflip: return "hflip";
  case AugmentKind::vflip: return "vflip";
  case AugmentKind::color_jitter: return "color_jitter";
  }
  return "channel_permute";
}

inline AugmentKind parse_augment_kind(std::string_view s) {
  if (s == "channel_permute") return AugmentKind::channel_permute;
  if (s == "hflip") return AugmentKind::hflip;
  if (s == "vflip") return AugmentKind::vflip;
  if (s == "color_jitter") return AugmentKind::color_jitter;
  throw ParameterError("unknown augment op \"" + std::string(s) + "\"");
}

inline std::string_view to_string(AugmentTiming t) noexcept {
  switch (t) {
  case AugmentTiming::before: return "before";
  case AugmentTiming::after: return "after";
  case AugmentTiming::both: return "both";
  }
  return "before";
}

inline AugmentTiming parse_timing(std::string_view s) {
  if (s == "before") return AugmentTiming::before;
  if (s == "after") return AugmentTiming::after;
  if (s == "both") return AugmentTiming::both;
  throw ParameterError("unknown augment timing \"" + std::string(s) +
                       "\" (expected before|after|both)");
}

inline void validate_jitter(const JitterStrength& j) {
  for (double d : {j.brightness, j.contrast, j.saturation}) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw ParameterError("jitter strengths must lie in [0, 1], got " +
                           std::to_string(d));
    }
  }
}

// ---------------------------------------------------------------------------
// Channel permutation

/// Uniform permutation of 0..channels-1 (Fisher-Yates), identity included.
inline std::vector<std::size_t> sample_permutation(std::size_t channels, RngStream& s) {
  std::vector<std::size_t> perm(channels);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = channels; i > 1; --i) {
    const auto j = static_cast<std::size_t>(s.uniform_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

/// Output channel i is input channel perm[i].
inline ImageTensor apply_channel_permutation(const ImageTensor& img,
                                             const std::vector<std::size_t>& perm) {
  if (perm.size() != img.channels()) {
    throw ParameterError("permutation length " + std::to_string(perm.size()) +
                         " does not match " + std::to_string(img.channels()) +
                         " channels");
  }
  std::vector<char> seen(perm.size(), 0);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) {
      throw ParameterError("invalid channel permutation");
    }
    seen[p] = 1;
  }
  ImageTensor out(img.channels(), img.height(), img.width());
  for (std::size_t c = 0; c < img.channels(); ++c) {
    const auto from = img.plane(perm[c]);
    std::copy(from.begin(), from.end(), out.plane(c).begin());
  }
  return out;
}

inline std::pair<ImageTensor, std::vector<std::size_t>>
channel_permute(const ImageTensor& img, RngStream& s) {
  auto perm = sample_permutation(img.channels(), s);
  auto out = apply_channel_permutation(img, perm);
  return {std::move(out), std::move(perm)};
}

// ---------------------------------------------------------------------------
// Flips

inline ImageTensor flip(const ImageTensor& img, FlipAxis axis) {
  ImageTensor out(img.channels(), img.height(), img.width());
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  for (std::size_t c = 0; c < img.channels(); ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        out.at(c, y, x) = axis == FlipAxis::horizontal ? img.at(c, y, w - 1 - x)
                                                       : img.at(c, h - 1 - y, x);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Color jitter

/// Sampled jitter: factors (brightness, contrast, saturation) and the order
/// in which they are applied (indices into factors).
struct JitterDraw {
  std::array<double, 3> factors{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> order{0, 1, 2};

  friend bool operator==(const JitterDraw&, const JitterDraw&) = default;
};

inline JitterDraw sample_jitter(const JitterStrength& p, RngStream& s) {
  validate_jitter(p);
  JitterDraw d;
  d.factors[0] = sample_uniform_range(s, 1.0 - p.brightness, 1.0 + p.brightness);
  d.factors[1] = sample_uniform_range(s, 1.0 - p.contrast, 1.0 + p.contrast);
  d.factors[2] = sample_uniform_range(s, 1.0 - p.saturation, 1.0 + p.saturation);
  const auto perm = sample_permutation(3, s);
  std::copy(perm.begin(), perm.end(), d.order.begin());
  return d;
}

namespace detail {

inline float clamp_unit(double v) noexcept {
  return std::clamp(static_cast<float>(v), 0.0f, 1.0f);
}

inline void adjust_brightness(ImageTensor& img, double f) {
  for (auto& v : img.data()) {
    v = clamp_unit(static_cast<double>(v) * f);
  }
}

/// Blend toward the image-wide mean of the per-pixel channel average.
inline void adjust_contrast(ImageTensor& img, double f) {
  double sum = 0.0;
  for (const float v : img.data()) {
    sum += v;
  }
  const double mean = sum / static_cast<double>(img.size());
  for (auto& v : img.data()) {
    v = clamp_unit(mean + f * (static_cast<double>(v) - mean));
  }
}

/// Blend each pixel toward its own channel mean; three-channel images only.
inline void adjust_saturation(ImageTensor& img, double f) {
  if (img.channels() != 3) {
    return;
  }
  const std::size_t n = img.plane_size();
  float* r = img.plane(0).data();
  float* g = img.plane(1).data();
  float* b = img.plane(2).data();
  for (std::size_t i = 0; i < n; ++i) {
    const double gray = (static_cast<double>(r[i]) + g[i] + b[i]) / 3.0;
    r[i] = clamp_unit(gray + f * (r[i] - gray));
    g[i] = clamp_unit(gray + f * (g[i] - gray));
    b[i] = clamp_unit(gray + f * (b[i] - gray));
  }
}

} // namespace detail

/// Applies a sampled jitter. A factor of exactly 1 leaves the image untouched.
inline ImageTensor apply_jitter(const ImageTensor& img, const JitterDraw& d) {
  ImageTensor out = img;
  for (const std::size_t which : d.order) {
    const double f = d.factors.at(which);
    if (f == 1.0) {
      continue;
    }
    switch (which) {
    case 0: detail::adjust_brightness(out, f); break;
    case 1: detail::adjust_contrast(out, f); break;
    case 2: detail::adjust_saturation(out, f); break;
    default: throw ParameterError("invalid jitter order entry");
    }
  }
  return out;
}

inline ImageTensor color_jitter(const ImageTensor& img, const JitterStrength& p,
                                RngStream& s) {
  return apply_jitter(img, sample_jitter(p, s));
}

// ---------------------------------------------------------------------------
// Recorded application

/// Where an intermediate op fired.
enum class AugmentPlacement { before, after };

/**
 * One applied intermediate op with every sampled parameter, enough to
 * re-apply it without randomness. `target` is the id of the image it was
 * applied to (a view id, a chain intermediate id, or the final image id).
 */
struct AugmentRecord {
  AugmentKind kind = AugmentKind::channel_permute;
  AugmentPlacement placement = AugmentPlacement::before;
  std::size_t target = 0;
  std::vector<std::size_t> permutation; // channel_permute
  JitterDraw jitter;                    // color_jitter

  friend bool operator==(const AugmentRecord&, const AugmentRecord&) = default;
};

inline AugmentRecord sample_augment(const AugmentOp& op, std::size_t channels,
                                    AugmentPlacement placement,
                                    std::size_t target, RngStream& s) {
  AugmentRecord rec;
  rec.kind = op.kind;
  rec.placement = placement;
  rec.target = target;
  switch (op.kind) {
  case AugmentKind::channel_permute:
    rec.permutation = sample_permutation(channels, s);
    break;
  case AugmentKind::color_jitter:
    rec.jitter = sample_jitter(op.jitter, s);
    break;
  case AugmentKind::hflip:
  case AugmentKind::vflip:
    break;
  }
  return rec;
}

inline ImageTensor apply_augment(const ImageTensor& img, const AugmentRecord& rec) {
  switch (rec.kind) {
  case AugmentKind::channel_permute:
    return apply_channel_permutation(img, rec.permutation);
  case AugmentKind::hflip:
    return flip(img, FlipAxis::horizontal);
  case AugmentKind::vflip:
    return flip(img, FlipAxis::vertical);
  case AugmentKind::color_jitter:
    return apply_jitter(img, rec.jitter);
  }
  return img;
}

} // namespace cropmix

#endif // CROPMIX_AUGMENT_HPP_INCLUDED
