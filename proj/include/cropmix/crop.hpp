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

#ifndef CROPMIX_CROP_HPP_INCLUDED
#define CROPMIX_CROP_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cropmix/errors.hpp"
#include "cropmix/rng.hpp"

namespace cropmix {

/// Interval of crop area as a fraction of the source area.
struct CropScaleRange {
  double lo = 0.01;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  friend bool operator==(const CropScaleRange&, const CropScaleRange&) = default;
};

/// Interval of crop width/height ratios.
struct AspectRatioRange {
  double lo = 3.0 / 4.0;
  double hi = 4.0 / 3.0;

  friend bool operator==(const AspectRatioRange&, const AspectRatioRange&) = default;
};

struct CropRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  std::size_t area() const noexcept { return w * h; }
  bool fits(std::size_t src_w, std::size_t src_h) const noexcept {
    return w >= 1 && h >= 1 && x + w <= src_w && y + h <= src_h;
  }
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

/// Strict form used for configuration: 0 < lo < hi <= 1.
inline void validate_scale_range(const CropScaleRange& r) {
  if (!(r.lo > 0.0 && r.lo < r.hi && r.hi <= 1.0)) {
    throw ParameterError("crop scale range must satisfy 0 < lo < hi <= 1, got (" +
                         std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")");
  }
}

inline void validate_ratio_range(const AspectRatioRange& r) {
  if (!(r.lo > 0.0 && r.lo <= r.hi && std::isfinite(r.hi))) {
    throw ParameterError("aspect ratio range must satisfy 0 < lo <= hi, got (" +
                         std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")");
  }
}

/**
 * Splits `whole` into n equal-width contiguous sub-ranges in ascending order.
 * Boundaries are whole.lo + i * width / n; the last upper bound is whole.hi
 * exactly.
 */
inline std::vector<CropScaleRange> partition_scale(const CropScaleRange& whole,
                                                   std::size_t n) {
  if (n == 0) {
    throw ParameterError("partition_scale requires n >= 1");
  }
  std::vector<CropScaleRange> parts(n);
  const double step = whole.width() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    parts[i].lo = i == 0 ? whole.lo : whole.lo + static_cast<double>(i) * step;
    parts[i].hi = i + 1 == n ? whole.hi
                             : whole.lo + static_cast<double>(i + 1) * step;
  }
  return parts;
}

/// Index of the sub-range containing `fraction`; ranges are half-open except
/// the last. Returns parts.size() when outside every range.
inline std::size_t partition_index(const std::vector<CropScaleRange>& parts,
                                   double fraction) noexcept {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool last = i + 1 == parts.size();
    if (fraction >= parts[i].lo && (fraction < parts[i].hi || (last && fraction <= parts[i].hi))) {
      return i;
    }
  }
  return parts.size();
}

inline constexpr int kCropAttempts = 10;

/**
 * Random Resized Crop rectangle.
 *
 * Draws a target area uniformly from scale * source area and a log-uniform
 * aspect ratio, rounds to integer sides, and accepts the first candidate that
 * fits. After kCropAttempts misses it returns a centred crop whose ratio is
 * the source ratio clamped into `ratio` and whose area is the midpoint scale,
 * shrunk until it fits.
 */
inline CropRect sample_crop(std::size_t src_w, std::size_t src_h,
                            const CropScaleRange& scale,
                            const AspectRatioRange& ratio, RngStream& s) {
  if (src_w == 0 || src_h == 0) {
    throw ParameterError("sample_crop requires a non-empty source");
  }
  if (!(scale.lo > 0.0 && scale.lo <= scale.hi && scale.hi <= 1.0)) {
    throw ParameterError("crop scale must satisfy 0 < lo <= hi <= 1");
  }
  validate_ratio_range(ratio);

  const double area = static_cast<double>(src_w) * static_cast<double>(src_h);
  const double log_lo = std::log(ratio.lo);
  const double log_hi = std::log(ratio.hi);
  for (int attempt = 0; attempt < kCropAttempts; ++attempt) {
    const double target = area * sample_uniform_range(s, scale.lo, scale.hi);
    const double r = std::exp(sample_uniform_range(s, log_lo, log_hi));
    const auto w = static_cast<long long>(std::llround(std::sqrt(target * r)));
    const auto h = static_cast<long long>(std::llround(std::sqrt(target / r)));
    if (w >= 1 && h >= 1 && static_cast<std::size_t>(w) <= src_w &&
        static_cast<std::size_t>(h) <= src_h) {
      CropRect rect;
      rect.w = static_cast<std::size_t>(w);
      rect.h = static_cast<std::size_t>(h);
      rect.x = static_cast<std::size_t>(s.uniform_below(src_w - rect.w + 1));
      rect.y = static_cast<std::size_t>(s.uniform_below(src_h - rect.h + 1));
      return rect;
    }
  }

  // Fallback: deterministic centre crop.
  const double src_ratio = static_cast<double>(src_w) / static_cast<double>(src_h);
  const double r = std::clamp(src_ratio, ratio.lo, ratio.hi);
  // Largest rect of ratio r inside the frame.
  const double max_w = std::min(static_cast<double>(src_w), static_cast<double>(src_h) * r);
  const double max_fraction = max_w * (max_w / r) / area;
  const double fraction = std::min(0.5 * (scale.lo + scale.hi), max_fraction);
  const double target = area * fraction;
  CropRect rect;
  rect.w = static_cast<std::size_t>(std::clamp<long long>(
      std::llround(std::sqrt(target * r)), 1, static_cast<long long>(src_w)));
  rect.h = static_cast<std::size_t>(std::clamp<long long>(
      std::llround(std::sqrt(target / r)), 1, static_cast<long long>(src_h)));
  rect.x = (src_w - rect.w) / 2;
  rect.y = (src_h - rect.h) / 2;
  return rect;
}

/// One cropping operation: its assigned scale sub-range and sampled rect.
struct CropAssignment {
  CropScaleRange range;
  CropRect rect;

  friend bool operator==(const CropAssignment&, const CropAssignment&) = default;
};

/// Partitions `whole` into n sub-ranges and samples one rect per sub-range,
/// in ascending scale order.
inline std::vector<CropAssignment>
sample_n_crops(std::size_t src_w, std::size_t src_h, const CropScaleRange& whole,
               const AspectRatioRange& ratio, std::size_t n, RngStream& s) {
  const auto parts = partition_scale(whole, n);
  std::vector<CropAssignment> out;
  out.reserve(n);
  for (const auto& part : parts) {
    out.push_back({part, sample_crop(src_w, src_h, part, ratio, s)});
  }
  return out;
}

} // namespace cropmix

#endif // CROPMIX_CROP_HPP_INCLUDED
