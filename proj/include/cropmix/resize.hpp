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

#ifndef CROPMIX_RESIZE_HPP_INCLUDED
#define CROPMIX_RESIZE_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cropmix/crop.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

enum class InterpolationMode { nearest, bilinear, bicubic };

inline std::string_view to_string(InterpolationMode m) noexcept {
  switch (m) {
  case InterpolationMode::nearest: return "nearest";
  case InterpolationMode::bilinear: return "bilinear";
  case InterpolationMode::bicubic: return "bicubic";
  }
  return "bilinear";
}

inline InterpolationMode parse_interpolation(std::string_view s) {
  if (s == "nearest") return InterpolationMode::nearest;
  if (s == "bilinear") return InterpolationMode::bilinear;
  if (s == "bicubic") return InterpolationMode::bicubic;
  throw ParameterError("unknown interpolation mode \"" + std::string(s) +
                       "\" (expected nearest|bilinear|bicubic)");
}

namespace detail {

// Keys cubic convolution kernel, a = -0.5.
inline double keys_cubic(double x) noexcept {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) {
    return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  }
  if (x < 2.0) {
    return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  }
  return 0.0;
}

/// Per-output-sample source indices and weights along one axis.
struct AxisTaps {
  std::size_t per_sample = 1;
  std::vector<std::size_t> index;
  std::vector<double> weight;
};

/**
 * Taps for resampling `len` source samples starting at `offset` onto `out`
 * samples. Half-pixel centres: src = (dst + 0.5) * len / out - 0.5. Source
 * indices are clamped into [offset, offset + len).
 */
inline AxisTaps make_taps(std::size_t offset, std::size_t len, std::size_t out,
                          InterpolationMode mode) {
  AxisTaps taps;
  const double scale = static_cast<double>(len) / static_cast<double>(out);
  const auto last = static_cast<long long>(len) - 1;
  auto clamp_idx = [&](long long i) {
    return offset + static_cast<std::size_t>(std::clamp<long long>(i, 0, last));
  };
  switch (mode) {
  case InterpolationMode::nearest:
    taps.per_sample = 1;
    for (std::size_t d = 0; d < out; ++d) {
      const auto i = static_cast<long long>(std::floor((static_cast<double>(d) + 0.5) * scale));
      taps.index.push_back(clamp_idx(i));
      taps.weight.push_back(1.0);
    }
    break;
  case InterpolationMode::bilinear:
    taps.per_sample = 2;
    for (std::size_t d = 0; d < out; ++d) {
      const double src = (static_cast<double>(d) + 0.5) * scale - 0.5;
      const double base = std::floor(src);
      const double t = src - base;
      const auto i0 = static_cast<long long>(base);
      taps.index.push_back(clamp_idx(i0));
      taps.index.push_back(clamp_idx(i0 + 1));
      taps.weight.push_back(1.0 - t);
      taps.weight.push_back(t);
    }
    break;
  case InterpolationMode::bicubic:
    taps.per_sample = 4;
    for (std::size_t d = 0; d < out; ++d) {
      const double src = (static_cast<double>(d) + 0.5) * scale - 0.5;
      const double base = std::floor(src);
      const double t = src - base;
      const auto i0 = static_cast<long long>(base);
      for (int k = -1; k <= 2; ++k) {
        taps.index.push_back(clamp_idx(i0 + k));
        taps.weight.push_back(keys_cubic(t - static_cast<double>(k)));
      }
    }
    break;
  }
  return taps;
}

inline float to_unit_float(double v) noexcept {
  return std::clamp(static_cast<float>(v), 0.0f, 1.0f);
}

} // namespace detail

/// Copies the pixels of `rect` into a new tensor.
inline ImageTensor extract(const ImageTensor& src, const CropRect& rect) {
  if (!rect.fits(src.width(), src.height())) {
    throw BoundsError("crop rect does not fit in " + src.shape_string() + " source");
  }
  ImageTensor out(src.channels(), rect.h, rect.w);
  for (std::size_t c = 0; c < src.channels(); ++c) {
    for (std::size_t y = 0; y < rect.h; ++y) {
      for (std::size_t x = 0; x < rect.w; ++x) {
        out.at(c, y, x) = src.at(c, rect.y + y, rect.x + x);
      }
    }
  }
  return out;
}

/**
 * Fused crop + resize: resamples the `rect` region of `src` to
 * out_h x out_w. Separable; accumulates in double and rounds once to float,
 * so partition-of-unity kernels reproduce constants exactly. Samples outside
 * the rect are clamped to its edge, which makes this identical to
 * resize(extract(src, rect), ...).
 */
inline ImageTensor crop_and_resize(const ImageTensor& src, const CropRect& rect,
                                   std::size_t out_w, std::size_t out_h,
                                   InterpolationMode mode) {
  if (out_w == 0 || out_h == 0) {
    throw ParameterError("resize output dimensions must be >= 1");
  }
  if (!rect.fits(src.width(), src.height())) {
    throw BoundsError("crop rect (" + std::to_string(rect.x) + "," +
                      std::to_string(rect.y) + "," + std::to_string(rect.w) + "," +
                      std::to_string(rect.h) + ") does not fit in " +
                      src.shape_string() + " source");
  }
  ImageTensor out(src.channels(), out_h, out_w);

  if (mode == InterpolationMode::nearest) {
    const auto tx = detail::make_taps(rect.x, rect.w, out_w, mode);
    const auto ty = detail::make_taps(rect.y, rect.h, out_h, mode);
    for (std::size_t c = 0; c < src.channels(); ++c) {
      for (std::size_t y = 0; y < out_h; ++y) {
        for (std::size_t x = 0; x < out_w; ++x) {
          out.at(c, y, x) = src.at(c, ty.index[y], tx.index[x]);
        }
      }
    }
    return out;
  }

  const auto tx = detail::make_taps(rect.x, rect.w, out_w, mode);
  const auto ty = detail::make_taps(0, rect.h, out_h, mode);
  const std::size_t kx = tx.per_sample;
  const std::size_t ky = ty.per_sample;
  std::vector<double> rows(rect.h * out_w);
  std::vector<double> acc(out_w);
  // Only rows referenced by a vertical tap need the horizontal pass.
  std::vector<char> needed(rect.h, 0);
  for (const auto i : ty.index) {
    needed[i] = 1;
  }
  for (std::size_t c = 0; c < src.channels(); ++c) {
    for (std::size_t y = 0; y < rect.h; ++y) {
      if (!needed[y]) {
        continue;
      }
      const float* line = src.plane(c).data() + (rect.y + y) * src.width();
      double* dst = rows.data() + y * out_w;
      for (std::size_t x = 0; x < out_w; ++x) {
        const std::size_t* idx = tx.index.data() + x * kx;
        const double* w = tx.weight.data() + x * kx;
        double sum = 0.0;
        for (std::size_t k = 0; k < kx; ++k) {
          sum += w[k] * static_cast<double>(line[idx[k]]);
        }
        dst[x] = sum;
      }
    }
    float* plane = out.plane(c).data();
    for (std::size_t y = 0; y < out_h; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t k = 0; k < ky; ++k) {
        const double w = ty.weight[y * ky + k];
        const double* row = rows.data() + ty.index[y * ky + k] * out_w;
        for (std::size_t x = 0; x < out_w; ++x) {
          acc[x] += w * row[x];
        }
      }
      for (std::size_t x = 0; x < out_w; ++x) {
        plane[y * out_w + x] = detail::to_unit_float(acc[x]);
      }
    }
  }
  return out;
}

inline ImageTensor resize(const ImageTensor& src, std::size_t out_w,
                          std::size_t out_h, InterpolationMode mode) {
  return crop_and_resize(src, CropRect{0, 0, src.width(), src.height()}, out_w,
                         out_h, mode);
}

} // namespace cropmix

#endif // CROPMIX_RESIZE_HPP_INCLUDED
