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

#ifndef CROPMIX_TENSOR_HPP_INCLUDED
#define CROPMIX_TENSOR_HPP_INCLUDED

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cropmix/errors.hpp"

namespace cropmix {

/**
 * Channel-major float image. Values live in [0, 1] and are stored
 * plane by plane: index = (c * height + y) * width + x.
 */
class ImageTensor {
public:
  ImageTensor() = default;

  /// Zero-filled tensor.
  ImageTensor(std::size_t channels, std::size_t height, std::size_t width)
      : channels_(channels), height_(height), width_(width),
        data_(checked_size(channels, height, width), 0.0f) {}

  /// Takes ownership of `data`, validating its length and value range.
  ImageTensor(std::size_t channels, std::size_t height, std::size_t width,
              std::vector<float> data)
      : channels_(channels), height_(height), width_(width),
        data_(std::move(data)) {
    if (data_.size() != checked_size(channels, height, width)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(channels) + "x" +
                       std::to_string(height) + "x" + std::to_string(width));
    }
    validate_range(data_);
  }

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept { return height_ * width_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  std::span<const float> plane(std::size_t c) const noexcept {
    return data().subspan(c * plane_size(), plane_size());
  }
  std::span<float> plane(std::size_t c) noexcept {
    return data().subspan(c * plane_size(), plane_size());
  }

  float at(std::size_t c, std::size_t y, std::size_t x) const noexcept {
    return data_[(c * height_ + y) * width_ + x];
  }
  float& at(std::size_t c, std::size_t y, std::size_t x) noexcept {
    return data_[(c * height_ + y) * width_ + x];
  }

  bool same_shape(const ImageTensor& other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  std::string shape_string() const {
    return std::to_string(channels_) + "x" + std::to_string(height_) + "x" +
           std::to_string(width_);
  }

  /// Element-wise equality of shape and payload.
  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

  /// Throws DataRangeError naming the first non-finite or out-of-range value.
  static void validate_range(std::span<const float> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const float v = values[i];
      if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
        throw DataRangeError(i, v);
      }
    }
  }

private:
  static std::size_t checked_size(std::size_t c, std::size_t h, std::size_t w) {
    if (c == 0 || h == 0 || w == 0) {
      throw ShapeError("tensor dimensions must be >= 1, got " +
                       std::to_string(c) + "x" + std::to_string(h) + "x" +
                       std::to_string(w));
    }
    return c * h * w;
  }

  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> data_;
};

inline void require_same_shape(const ImageTensor& a, const ImageTensor& b,
                               const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " +
                     a.shape_string() + " vs " + b.shape_string());
  }
}

} // namespace cropmix

#endif // CROPMIX_TENSOR_HPP_INCLUDED
