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

#ifndef CROPMIX_DATASET_HPP_INCLUDED
#define CROPMIX_DATASET_HPP_INCLUDED

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropmix/errors.hpp"
#include "cropmix/image_codec.hpp"
#include "cropmix/manifest.hpp"
#include "cropmix/raw_tensor.hpp"
#include "cropmix/tensor.hpp"

namespace cropmix {

namespace fs = std::filesystem;

inline std::string lower_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline const std::set<std::string>& default_image_extensions() {
  static const std::set<std::string> kExt = {".png", ".jpg", ".jpeg"};
  return kExt;
}

/**
 * Recursively lists files under `root` whose lower-cased extension is in
 * `extensions`. Paths are relative to root with '/' separators and sorted by
 * byte value; a file's position is its sample index.
 */
inline std::vector<std::string>
scan_dataset(const fs::path& root,
             const std::set<std::string>& extensions = default_image_extensions()) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IoError("dataset root " + root.string() + " is not a readable directory");
  }
  std::vector<std::string> out;
  fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
  if (ec) {
    throw IoError("cannot read dataset root " + root.string() + ": " + ec.message());
  }
  for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) {
      throw IoError("error scanning " + root.string() + ": " + ec.message());
    }
    if (!it->is_regular_file(ec)) {
      continue;
    }
    if (!extensions.count(lower_ascii(it->path().extension().string()))) {
      continue;
    }
    out.push_back(fs::relative(it->path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct OutputFormats {
  bool png = false;
  bool raw = true;
};

/// Parses a comma-separated subset of {png, raw}.
inline OutputFormats parse_formats(std::string_view text) {
  OutputFormats f{false, false};
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "png") {
      f.png = true;
    } else if (item == "raw") {
      f.raw = true;
    } else {
      throw ParameterError("unknown output format \"" + item + "\" (expected png, raw)");
    }
  }
  if (!f.png && !f.raw) {
    throw ParameterError("at least one output format is required");
  }
  return f;
}

inline std::string sample_stem(std::uint64_t index) {
  return "sample_" + std::to_string(index);
}

namespace detail {

/// Writes through a temporary sibling and renames it into place.
template <class Writer>
void write_atomically(const fs::path& target, Writer&& write) {
  fs::path tmp = target;
  tmp += ".tmp";
  write(tmp.string());
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + target.string());
  }
}

} // namespace detail

inline void write_text_atomically(const fs::path& target, const std::string& text) {
  detail::write_atomically(target, [&](const std::string& tmp) {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp + " for writing");
    }
    out << text;
    out.close();
    if (!out) {
      throw IoError("failed to write " + tmp);
    }
  });
}

/**
 * Writes the requested outputs for one sample plus `sample_<index>.json`.
 * `manifest` supplies source, seed, digest and plan; its output list is
 * filled in and the completed manifest returned.
 */
inline SampleManifest persist(const fs::path& out_dir, std::uint64_t index,
                              const ImageTensor& tensor, SampleManifest manifest,
                              const OutputFormats& formats) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  const std::string stem = sample_stem(index);
  manifest.sample_index = index;
  manifest.outputs.clear();
  if (formats.raw) {
    const std::string name = stem + ".cmtx";
    detail::write_atomically(out_dir / name,
                             [&](const std::string& tmp) { save_raw(tensor, tmp); });
    manifest.outputs.push_back(name);
  }
  if (formats.png) {
    const std::string name = stem + ".png";
    detail::write_atomically(out_dir / name,
                             [&](const std::string& tmp) { encode_png(tensor, tmp); });
    manifest.outputs.push_back(name);
  }
  write_text_atomically(out_dir / (stem + ".json"),
                        manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

inline SampleManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ReplayError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j);
}

} // namespace cropmix

#endif // CROPMIX_DATASET_HPP_INCLUDED
