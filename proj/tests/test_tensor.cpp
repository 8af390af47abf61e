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

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "cropmix/raw_tensor.hpp"
#include "test_util.hpp"

using namespace cropmix;

namespace {

std::string bytes_of(const ImageTensor& t) {
  std::ostringstream out(std::ios::binary);
  write_raw(t, out);
  return out.str();
}

std::string make_raw(const char* magic, std::uint8_t version, std::uint32_t c,
                     std::uint32_t h, std::uint32_t w, const std::vector<float>& payload) {
  std::string s(magic, 4);
  s.push_back(static_cast<char>(version));
  for (std::uint32_t d : {c, h, w}) {
    for (int k = 0; k < 4; ++k) s.push_back(static_cast<char>((d >> (8 * k)) & 0xFF));
  }
  for (float f : payload) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    for (int k = 0; k < 4; ++k) s.push_back(static_cast<char>((u >> (8 * k)) & 0xFF));
  }
  return s;
}

} // namespace

TEST(ImageTensor, RejectsBadShapesAndValues) {
  EXPECT_THROW(ImageTensor(0, 1, 1), ShapeError);
  EXPECT_THROW(ImageTensor(1, 2, 2, std::vector<float>(3, 0.0f)), ShapeError);
  try {
    ImageTensor(1, 1, 3, {0.0f, 1.5f, 0.0f});
    FAIL() << "expected DataRangeError";
  } catch (const DataRangeError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
  EXPECT_THROW(ImageTensor(1, 1, 1, {std::numeric_limits<float>::quiet_NaN()}),
               DataRangeError);
}

TEST(RawTensor, SingleZeroValueIs21Bytes) {
  const auto s = bytes_of(ImageTensor(1, 1, 1));
  ASSERT_EQ(s.size(), 21u);
  EXPECT_EQ(s.substr(0, 4), "CMTX");
  EXPECT_EQ(s[4], 1);
  EXPECT_EQ(s.substr(17), std::string(4, '\0'));
}

TEST(RawTensor, SizeIsHeaderPlusPayload) {
  EXPECT_EQ(bytes_of(ImageTensor(3, 2, 2)).size(), 65u);
  for (auto [c, h, w] : {std::tuple{1, 1, 1}, {3, 5, 7}, {2, 16, 1}}) {
    EXPECT_EQ(bytes_of(ImageTensor(c, h, w)).size(), raw_file_size(c, h, w));
    EXPECT_EQ(raw_file_size(c, h, w), 17u + 4u * c * h * w);
  }
}

TEST(RawTensor, LittleEndianHeader) {
  const auto s = bytes_of(ImageTensor(3, 258, 1));
  const unsigned char* p = reinterpret_cast<const unsigned char*>(s.data());
  EXPECT_EQ(p[5], 3);
  EXPECT_EQ(p[9], 2); // 258 = 0x0102
  EXPECT_EQ(p[10], 1);
  EXPECT_EQ(p[13], 1);
}

TEST(RawTensor, RoundTripIsBitExact) {
  const auto t = testutil::random_tensor(3, 224, 224, 42);
  const auto s = bytes_of(t);
  std::istringstream in(s, std::ios::binary);
  const auto back = read_raw(in);
  ASSERT_TRUE(back.same_shape(t));
  EXPECT_EQ(std::memcmp(back.data().data(), t.data().data(), 4 * t.size()), 0);
  // and the other direction
  EXPECT_EQ(bytes_of(back), s);
}

TEST(RawTensor, DecodesHandBuiltFile) {
  std::istringstream in(make_raw("CMTX", 1, 1, 1, 1, {0.5f}), std::ios::binary);
  const auto t = read_raw(in);
  EXPECT_EQ(t.channels(), 1u);
  EXPECT_EQ(t.at(0, 0, 0), 0.5f);
}

TEST(RawTensor, RejectsBadMagic) {
  std::istringstream in(make_raw("XXXX", 1, 1, 1, 1, {0.5f}), std::ios::binary);
  EXPECT_THROW(read_raw(in), FormatError);
}

TEST(RawTensor, RejectsUnknownVersion) {
  std::istringstream in(make_raw("CMTX", 2, 1, 1, 1, {0.5f}), std::ios::binary);
  EXPECT_THROW(read_raw(in), UnsupportedVersionError);
}

TEST(RawTensor, TruncatedPayloadReportsLengths) {
  auto s = make_raw("CMTX", 1, 3, 2, 2, std::vector<float>(12, 0.25f));
  s.resize(17 + 40);
  std::istringstream in(s, std::ios::binary);
  try {
    read_raw(in);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_EQ(e.expected(), 48u);
    EXPECT_EQ(e.actual(), 40u);
  }
  const std::vector<std::uint8_t> bytes(s.begin(), s.end());
  EXPECT_THROW(decode_raw(bytes), TruncationError);
}

TEST(RawTensor, RejectsOutOfRangePayload) {
  std::istringstream in(make_raw("CMTX", 1, 1, 1, 3, {0.0f, 0.5f, -0.25f}), std::ios::binary);
  try {
    read_raw(in);
    FAIL() << "expected DataRangeError";
  } catch (const DataRangeError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  std::istringstream nan_in(
      make_raw("CMTX", 1, 1, 1, 1, {std::numeric_limits<float>::infinity()}), std::ios::binary);
  EXPECT_THROW(read_raw(nan_in), DataRangeError);
}

TEST(RawTensor, WriteFailureReportsOffset) {
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  try {
    write_raw(ImageTensor(1, 1, 1), out);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 0"), std::string::npos);
  }
}

TEST(RawTensor, RoundTripProperty) {
  // Random shapes and contents: encode/decode are mutual inverses.
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> dim(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = testutil::random_tensor(dim(gen), dim(gen), dim(gen), gen());
    const auto bytes = encode_raw(t);
    EXPECT_EQ(bytes.size(), raw_file_size(t.channels(), t.height(), t.width()));
    const auto back = decode_raw(bytes);
    EXPECT_EQ(back, t);
    EXPECT_EQ(encode_raw(back), bytes);
  }
}
