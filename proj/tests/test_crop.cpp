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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cropmix/crop.hpp"

using namespace cropmix;

namespace {

double fraction(const CropRect& r, double w, double h) {
  return static_cast<double>(r.area()) / (w * h);
}

} // namespace

TEST(PartitionScale, ThreeWaySplitOfWidestRange) {
  const auto p = partition_scale({0.01, 1.0}, 3);
  ASSERT_EQ(p.size(), 3u);
  const double expected[4] = {0.01, 0.34, 0.67, 1.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(p[i].lo, expected[i], 1e-9);
    EXPECT_NEAR(p[i].hi, expected[i + 1], 1e-9);
  }
}

TEST(PartitionScale, IdentityAndTwoWay) {
  const auto one = partition_scale({0.01, 1.0}, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (CropScaleRange{0.01, 1.0}));
  const auto two = partition_scale({0.01, 1.0}, 2);
  EXPECT_NEAR(two[0].hi, 0.505, 1e-12);
  EXPECT_NEAR(two[1].lo, 0.505, 1e-12);
  EXPECT_EQ(two[1].hi, 1.0);
}

TEST(PartitionScale, ZeroIsAnError) {
  EXPECT_THROW(partition_scale({0.01, 1.0}, 0), ParameterError);
}

TEST(PartitionScale, CompleteAndEqualWidths) {
  for (CropScaleRange whole : {CropScaleRange{0.01, 1.0}, {0.08, 1.0}, {0.2, 0.9}}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto p = partition_scale(whole, n);
      EXPECT_EQ(p.front().lo, whole.lo);
      EXPECT_EQ(p.back().hi, whole.hi);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(p[i].width(), whole.width() / n, 1e-9);
        if (i + 1 < n) {
          EXPECT_EQ(p[i].hi, p[i + 1].lo);
        }
      }
    }
  }
}

TEST(PartitionScale, BoundaryMembershipIsHalfOpen) {
  const auto p = partition_scale({0.0 + 0.01, 1.0}, 3);
  EXPECT_EQ(partition_index(p, p[1].lo), 1u);
  EXPECT_EQ(partition_index(p, 1.0), 2u);
  EXPECT_EQ(partition_index(p, 0.005), 3u);
}

TEST(SampleCrop, FullFrame) {
  auto s = split(1, 0);
  const auto r = sample_crop(512, 512, {1.0, 1.0}, {1.0, 1.0}, s);
  EXPECT_EQ(r, (CropRect{0, 0, 512, 512}));
}

TEST(SampleCrop, QuarterArea) {
  auto s = split(2, 0);
  for (int i = 0; i < 100; ++i) {
    const auto r = sample_crop(512, 512, {0.25, 0.25}, {1.0, 1.0}, s);
    EXPECT_EQ(r.w, 256u);
    EXPECT_EQ(r.h, 256u);
    EXPECT_LE(r.x, 256u);
    EXPECT_LE(r.y, 256u);
  }
}

TEST(SampleCrop, SmallestPartitionContainment) {
  auto s = split(3, 0);
  bool below = false, above = false;
  for (int i = 0; i < 10000; ++i) {
    const auto r = sample_crop(512, 512, {0.01, 0.34}, {}, s);
    ASSERT_TRUE(r.fits(512, 512));
    const double f = fraction(r, 512, 512);
    ASSERT_GE(f, 0.0098);
    ASSERT_LE(f, 0.3434);
    const double ratio = static_cast<double>(r.w) / r.h;
    below = below || ratio < 0.8;
    above = above || ratio > 1.25;
  }
  EXPECT_TRUE(below);
  EXPECT_TRUE(above);
}

TEST(SampleCrop, RatioContainmentWithRoundingSlack) {
  auto s = split(4, 0);
  const AspectRatioRange ratio{};
  for (int i = 0; i < 10000; ++i) {
    const auto r = sample_crop(640, 480, {0.01, 1.0}, ratio, s);
    ASSERT_TRUE(r.fits(640, 480));
    const double eps = 2.0 / static_cast<double>(std::min(r.w, r.h));
    const double q = static_cast<double>(r.w) / r.h;
    EXPECT_GE(q, ratio.lo / (1 + eps));
    EXPECT_LE(q, ratio.hi * (1 + eps));
  }
}

TEST(SampleCrop, FallbackAlwaysFits) {
  // A 1000x10 strip cannot host a near-square crop of half its area.
  auto s = split(5, 0);
  for (int i = 0; i < 100; ++i) {
    const auto r = sample_crop(1000, 10, {0.5, 0.6}, {}, s);
    EXPECT_TRUE(r.fits(1000, 10));
    EXPECT_EQ(r.h, 10u);
    EXPECT_EQ(r.x, (1000 - r.w) / 2);
  }
  const auto tiny = sample_crop(1, 1, {0.01, 0.02}, {}, s);
  EXPECT_EQ(tiny, (CropRect{0, 0, 1, 1}));
}

TEST(SampleNCrops, SingleCropIsPlainRrc) {
  auto a = split(6, 0);
  auto b = split(6, 0);
  const auto crops = sample_n_crops(400, 300, {0.08, 1.0}, {}, 1, a);
  ASSERT_EQ(crops.size(), 1u);
  EXPECT_EQ(crops[0].range, (CropScaleRange{0.08, 1.0}));
  EXPECT_EQ(crops[0].rect, sample_crop(400, 300, {0.08, 1.0}, {}, b));
}

TEST(SampleNCrops, EachRectFallsInItsPartition) {
  const auto parts = partition_scale({0.01, 1.0}, 3);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto s = split(7, i);
    const auto crops = sample_n_crops(512, 512, {0.01, 1.0}, {}, 3, s);
    ASSERT_EQ(crops.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(crops[k].range, parts[k]);
      const double f = fraction(crops[k].rect, 512, 512);
      EXPECT_GE(f, parts[k].lo * 0.98);
      EXPECT_LE(f, parts[k].hi * 1.02);
    }
  }
}

TEST(SampleNCrops, MeanAreaIncreasesWithPartition) {
  std::vector<double> mean(4, 0.0);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto s = split(8, i);
    const auto crops = sample_n_crops(512, 512, {0.01, 1.0}, {}, 4, s);
    for (std::size_t k = 0; k < 4; ++k) mean[k] += fraction(crops[k].rect, 512, 512) / 1000;
  }
  for (std::size_t k = 0; k + 1 < 4; ++k) EXPECT_LT(mean[k], mean[k + 1]);
}

TEST(SampleNCrops, PartitionSupportsOnlyTouchAtBoundaries) {
  // Area supports of different crops overlap at most within rounding slack
  // of the shared boundary.
  const auto parts = partition_scale({0.01, 1.0}, 4);
  std::vector<double> lo(4, 1.0), hi(4, 0.0);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto s = split(9, i);
    const auto crops = sample_n_crops(512, 512, {0.01, 1.0}, {}, 4, s);
    for (std::size_t k = 0; k < 4; ++k) {
      const double f = fraction(crops[k].rect, 512, 512);
      lo[k] = std::min(lo[k], f);
      hi[k] = std::max(hi[k], f);
    }
  }
  for (std::size_t k = 0; k + 1 < 4; ++k) {
    EXPECT_LE(hi[k], parts[k].hi * 1.02);
    EXPECT_GE(lo[k + 1], parts[k + 1].lo * 0.98);
  }
}
