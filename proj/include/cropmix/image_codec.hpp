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

#ifndef CROPMIX_IMAGE_CODEC_HPP_INCLUDED
#define CROPMIX_IMAGE_CODEC_HPP_INCLUDED

// PNG (libpng) and JPEG (libjpeg) decoding into ImageTensor, PNG encoding.
// 8-bit samples map to [0, 1] as v / 255; alpha is dropped; 16-bit PNGs are
// reduced to 8 bits first.

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "cropmix/errors.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw IoError("cannot open " + path);
  }
  return f;
}

/// Interleaved 8-bit pixels to a channel-major tensor.
inline ImageTensor from_interleaved(const std::vector<std::uint8_t>& px, std::size_t channels,
                                    std::size_t height, std::size_t width) {
  std::vector<float> data(channels * height * width);
  const std::size_t plane = height * width;
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      data[c * plane + i] = static_cast<float>(px[i * channels + c]) / 255.0f;
    }
  }
  return ImageTensor(channels, height, width, std::move(data));
}

// Decoding state kept out of the setjmp frame.
struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  char message[128] = {};
  ~PngReadState() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

// libpng reports through these instead of stderr; the error path longjmps.
inline void png_quiet_error(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
  std::snprintf(st->message, sizeof st->message, "%s", msg);
  png_longjmp(png, 1);
}

inline void png_quiet_warning(png_structp, png_const_charp) {}

inline bool png_read_body(PngReadState& st, std::FILE* f) {
  if (setjmp(png_jmpbuf(st.png))) {
    return false;
  }
  png_init_io(st.png, f);
  png_read_info(st.png, st.info);
  const int color = png_get_color_type(st.png, st.info);
  const int depth = png_get_bit_depth(st.png, st.info);
  if (depth == 16) png_set_strip_16(st.png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
  if (png_get_valid(st.png, st.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(st.png);
  png_set_strip_alpha(st.png);
  png_set_interlace_handling(st.png);
  png_read_update_info(st.png, st.info);
  st.width = png_get_image_width(st.png, st.info);
  st.height = png_get_image_height(st.png, st.info);
  st.channels = png_get_channels(st.png, st.info);
  const std::size_t stride = png_get_rowbytes(st.png, st.info);
  st.pixels.resize(stride * st.height);
  st.rows.resize(st.height);
  for (png_uint_32 y = 0; y < st.height; ++y) {
    st.rows[y] = st.pixels.data() + y * stride;
  }
  png_read_image(st.png, st.rows.data());
  png_read_end(st.png, nullptr);
  return true;
}

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<png_bytep> rows;
  ~PngWriteState() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

inline bool png_write_body(PngWriteState& st, std::FILE* f, std::uint32_t width,
                           std::uint32_t height, int color_type) {
  if (setjmp(png_jmpbuf(st.png))) {
    return false;
  }
  png_init_io(st.png, f);
  png_set_IHDR(st.png, st.info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(st.png, st.info);
  png_write_image(st.png, st.rows.data());
  png_write_end(st.png, nullptr);
  return true;
}

struct JpegErrorMgr {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

struct JpegReadState {
  jpeg_decompress_struct cinfo{};
  JpegErrorMgr err{};
  std::vector<std::uint8_t> pixels;
  bool created = false;
  ~JpegReadState() {
    if (created) jpeg_destroy_decompress(&cinfo);
  }
};

inline bool jpeg_read_body(JpegReadState& st, std::FILE* f) {
  st.cinfo.err = jpeg_std_error(&st.err.base);
  st.err.base.error_exit = jpeg_error_exit;
  if (setjmp(st.err.jump)) {
    return false;
  }
  jpeg_create_decompress(&st.cinfo);
  st.created = true;
  jpeg_stdio_src(&st.cinfo, f);
  jpeg_read_header(&st.cinfo, TRUE);
  st.cinfo.out_color_space =
      st.cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&st.cinfo);
  const std::size_t stride =
      static_cast<std::size_t>(st.cinfo.output_width) * st.cinfo.output_components;
  st.pixels.resize(stride * st.cinfo.output_height);
  while (st.cinfo.output_scanline < st.cinfo.output_height) {
    JSAMPROW row = st.pixels.data() + st.cinfo.output_scanline * stride;
    jpeg_read_scanlines(&st.cinfo, &row, 1);
  }
  jpeg_finish_decompress(&st.cinfo);
  return true;
}

} // namespace detail

inline ImageTensor decode_png(const std::string& path) {
  auto f = detail::open_file(path, "rb");
  std::uint8_t sig[8] = {};
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw DecodeError(path + ": not a PNG file");
  }
  detail::PngReadState st;
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &st, detail::png_quiet_error,
                                  detail::png_quiet_warning);
  if (!st.png) throw DecodeError(path + ": libpng init failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw DecodeError(path + ": libpng init failed");
  png_set_sig_bytes(st.png, 8);
  if (!detail::png_read_body(st, f.get())) {
    throw DecodeError(path + ": corrupt PNG (" + st.message + ")");
  }
  if (st.channels != 1 && st.channels != 3) {
    throw DecodeError(path + ": unexpected PNG channel count " + std::to_string(st.channels));
  }
  return detail::from_interleaved(st.pixels, st.channels, st.height, st.width);
}

inline ImageTensor decode_jpeg(const std::string& path) {
  auto f = detail::open_file(path, "rb");
  detail::JpegReadState st;
  if (!detail::jpeg_read_body(st, f.get())) {
    throw DecodeError(path + ": corrupt JPEG (" + st.err.message + ")");
  }
  return detail::from_interleaved(st.pixels, st.cinfo.output_components,
                                  st.cinfo.output_height, st.cinfo.output_width);
}

/// Decodes a PNG or JPEG file, chosen by its signature bytes.
inline ImageTensor decode(const std::string& path) {
  std::uint8_t sig[8] = {};
  std::size_t got = 0;
  {
    auto f = detail::open_file(path, "rb");
    got = std::fread(sig, 1, sizeof sig, f.get());
  }
  if (got == 8 && png_sig_cmp(sig, 0, 8) == 0) {
    return decode_png(path);
  }
  if (got >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) {
    return decode_jpeg(path);
  }
  throw DecodeError(path + ": unsupported image format (expected PNG or JPEG)");
}

/// 8-bit PNG via round(v * 255). Grayscale for C = 1, RGB for C = 3.
inline void encode_png(const ImageTensor& t, const std::string& path) {
  if (t.channels() != 1 && t.channels() != 3) {
    throw ParameterError("PNG output needs 1 or 3 channels, got " +
                         std::to_string(t.channels()));
  }
  const std::size_t c = t.channels();
  const std::size_t plane = t.plane_size();
  std::vector<std::uint8_t> px(plane * c);
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      px[i * c + k] = static_cast<std::uint8_t>(std::lround(t.data()[k * plane + i] * 255.0f));
    }
  }
  auto f = detail::open_file(path, "wb");
  detail::PngWriteState st;
  st.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!st.png) throw IoError(path + ": libpng init failed");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw IoError(path + ": libpng init failed");
  st.rows.resize(t.height());
  for (std::size_t y = 0; y < t.height(); ++y) {
    st.rows[y] = px.data() + y * t.width() * c;
  }
  if (!detail::png_write_body(st, f.get(), static_cast<std::uint32_t>(t.width()),
                              static_cast<std::uint32_t>(t.height()),
                              c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB)) {
    throw IoError(path + ": PNG write failed");
  }
  if (std::fflush(f.get()) != 0) {
    throw IoError(path + ": PNG flush failed");
  }
}

} // namespace cropmix

#endif // CROPMIX_IMAGE_CODEC_HPP_INCLUDED
