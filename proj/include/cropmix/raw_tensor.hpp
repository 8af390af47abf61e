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

#ifndef CROPMIX_RAW_TENSOR_HPP_INCLUDED
#define CROPMIX_RAW_TENSOR_HPP_INCLUDED

// Raw tensor file layout (all integers little-endian):
//
//   offset  size       field
//   0       4          magic "CMTX"
//   4       1          version (1)
//   5       12         C, H, W as uint32
//   17      4*C*H*W    float32 payload, channel-major
//
// The layout is fixed byte for byte; files written on any host are identical.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cropmix/errors.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

inline constexpr std::array<std::uint8_t, 4> kRawMagic{0x43, 0x4D, 0x54, 0x58};
inline constexpr std::uint8_t kRawVersion = 1;
inline constexpr std::size_t kRawHeaderSize = 17;

inline constexpr std::size_t raw_file_size(std::size_t c, std::size_t h,
                                           std::size_t w) {
  return kRawHeaderSize + 4 * c * h * w;
}

namespace detail {

inline void put_u32le(std::uint8_t* out, std::uint32_t v) {
  out[0] = static_cast<std::uint8_t>(v);
  out[1] = static_cast<std::uint8_t>(v >> 8);
  out[2] = static_cast<std::uint8_t>(v >> 16);
  out[3] = static_cast<std::uint8_t>(v >> 24);
}

inline std::uint32_t get_u32le(const std::uint8_t* in) {
  return static_cast<std::uint32_t>(in[0]) |
         (static_cast<std::uint32_t>(in[1]) << 8) |
         (static_cast<std::uint32_t>(in[2]) << 16) |
         (static_cast<std::uint32_t>(in[3]) << 24);
}

inline std::uint32_t dim_u32(std::size_t d) {
  if (d > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("tensor dimension " + std::to_string(d) +
                      " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(d);
}

inline std::array<std::uint8_t, kRawHeaderSize> raw_header(const ImageTensor& t) {
  std::array<std::uint8_t, kRawHeaderSize> h{};
  std::memcpy(h.data(), kRawMagic.data(), 4);
  h[4] = kRawVersion;
  put_u32le(h.data() + 5, dim_u32(t.channels()));
  put_u32le(h.data() + 9, dim_u32(t.height()));
  put_u32le(h.data() + 13, dim_u32(t.width()));
  return h;
}

struct RawHeader {
  std::uint32_t c, h, w;
};

/// Validates magic/version/dims of the first kRawHeaderSize bytes.
inline RawHeader parse_raw_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 ||
      std::memcmp(bytes.data(), kRawMagic.data(), 4) != 0) {
    throw FormatError("bad raw tensor magic (expected \"CMTX\")");
  }
  if (bytes.size() < 5) {
    throw TruncationError(kRawHeaderSize, bytes.size());
  }
  if (bytes[4] != kRawVersion) {
    throw UnsupportedVersionError(bytes[4]);
  }
  if (bytes.size() < kRawHeaderSize) {
    throw TruncationError(kRawHeaderSize, bytes.size());
  }
  RawHeader hdr{get_u32le(bytes.data() + 5), get_u32le(bytes.data() + 9),
                get_u32le(bytes.data() + 13)};
  if (hdr.c == 0 || hdr.h == 0 || hdr.w == 0) {
    throw FormatError("raw tensor declares a zero dimension");
  }
  return hdr;
}

inline std::vector<float> decode_payload(std::span<const std::uint8_t> bytes,
                                         std::size_t count) {
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(get_u32le(bytes.data() + 4 * i));
  }
  ImageTensor::validate_range(values);
  return values;
}

} // namespace detail

/// Serialises `t` into an in-memory byte buffer.
inline std::vector<std::uint8_t> encode_raw(const ImageTensor& t) {
  std::vector<std::uint8_t> out(raw_file_size(t.channels(), t.height(), t.width()));
  const auto header = detail::raw_header(t);
  std::memcpy(out.data(), header.data(), header.size());
  const auto values = t.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    detail::put_u32le(out.data() + kRawHeaderSize + 4 * i,
                      std::bit_cast<std::uint32_t>(values[i]));
  }
  return out;
}

inline ImageTensor decode_raw(std::span<const std::uint8_t> bytes) {
  const auto hdr = detail::parse_raw_header(bytes);
  const std::size_t count = std::size_t{hdr.c} * hdr.h * hdr.w;
  const std::size_t expected = 4 * count;
  const std::size_t actual = bytes.size() - kRawHeaderSize;
  if (actual < expected) {
    throw TruncationError(expected, actual);
  }
  if (actual > expected) {
    throw FormatError("raw tensor has " + std::to_string(actual - expected) +
                      " trailing bytes");
  }
  return ImageTensor(hdr.c, hdr.h, hdr.w,
                     detail::decode_payload(bytes.subspan(kRawHeaderSize), count));
}

/// Writes `t` to `sink`; returns the number of bytes written.
inline std::size_t write_raw(const ImageTensor& t, std::ostream& sink) {
  const auto bytes = encode_raw(t);
  // Chunked so that a failure can be pinned to an offset.
  constexpr std::size_t kChunk = 1 << 16;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, bytes.size() - off);
    sink.write(reinterpret_cast<const char*>(bytes.data() + off),
               static_cast<std::streamsize>(n));
    if (!sink) {
      throw IoError("raw tensor write failed at byte offset " +
                    std::to_string(off));
    }
  }
  return bytes.size();
}

/// Reads exactly one raw tensor from `source`. Trailing stream data is left
/// unread.
inline ImageTensor read_raw(std::istream& source) {
  std::array<std::uint8_t, kRawHeaderSize> header{};
  source.read(reinterpret_cast<char*>(header.data()), header.size());
  const auto got = static_cast<std::size_t>(source.gcount());
  const auto hdr = detail::parse_raw_header(std::span(header.data(), got));
  const std::size_t count = std::size_t{hdr.c} * hdr.h * hdr.w;
  std::vector<std::uint8_t> payload(4 * count);
  source.read(reinterpret_cast<char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
  const auto actual = static_cast<std::size_t>(source.gcount());
  if (actual < payload.size()) {
    throw TruncationError(payload.size(), actual);
  }
  return ImageTensor(hdr.c, hdr.h, hdr.w, detail::decode_payload(payload, count));
}

inline std::size_t save_raw(const ImageTensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  const auto n = write_raw(t, out);
  out.close();
  if (!out) {
    throw IoError("failed to flush " + path);
  }
  return n;
}

inline ImageTensor load_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return read_raw(in);
}

} // namespace cropmix

#endif // CROPMIX_RAW_TENSOR_HPP_INCLUDED
