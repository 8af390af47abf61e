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

#ifndef CROPMIX_CLI_HPP_INCLUDED
#define CROPMIX_CLI_HPP_INCLUDED

// Subcommand implementations behind the `cropmix` executable. Each returns a
// process exit status: 0 success, 1 usage/config/I-O error, 2 verification
// mismatch. Reports go to `out` as JSON, diagnostics to `err`.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <mutex>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropmix/bench.hpp"
#include "cropmix/config.hpp"
#include "cropmix/dataset.hpp"
#include "cropmix/errors.hpp"
#include "cropmix/image_codec.hpp"
#include "cropmix/manifest.hpp"
#include "cropmix/parallel.hpp"
#include "cropmix/pipeline.hpp"
#include "cropmix/raw_tensor.hpp"
#include "cropmix/stats.hpp"

namespace cropmix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMismatch = 2;

struct Invocation {
  std::string input;
  std::string output;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t workers = default_workers();
  std::string formats = "raw";
  std::string mode = "cropmix"; // bench only
  std::size_t source_width = 512;  // stats without --input
  std::size_t source_height = 512;
  std::size_t source_channels = 3;
};

namespace detail {

inline void require(const std::string& value, const char* flag, const char* cmd) {
  if (value.empty()) {
    throw ConfigError(std::string(cmd) + " requires " + flag);
  }
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + p.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// sample_<i>.json files in `dir`, ordered by i.
inline std::vector<std::pair<std::uint64_t, std::filesystem::path>>
list_manifests(const std::filesystem::path& dir) {
  static const std::regex kName(R"(sample_(\d+)\.json)");
  std::vector<std::pair<std::uint64_t, std::filesystem::path>> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, kName)) {
      out.emplace_back(std::stoull(m[1].str()), e.path());
    }
  }
  if (ec) {
    throw IoError("cannot list " + dir.string() + ": " + ec.message());
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

/// Produces `count` samples cycling over the scanned sources.
inline int cmd_sample(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require(inv.input, "--input", "sample");
    detail::require(inv.output, "--output", "sample");
    detail::require(inv.config, "--config", "sample");
    const auto cfg = load_config(inv.config);
    const auto formats = parse_formats(inv.formats);
    const auto sources = scan_dataset(inv.input);
    if (inv.count > 0 && sources.empty()) {
      throw IoError("no PNG/JPEG sources under " + inv.input);
    }
    const std::string digest = config_digest(cfg);
    const std::filesystem::path in_root(inv.input);
    const std::filesystem::path out_root(inv.output);
    const auto start = std::chrono::steady_clock::now();
    parallel_for(inv.count, inv.workers, [&](std::size_t i) {
      const std::string& rel = sources[i % sources.size()];
      const auto src = decode((in_root / rel).string());
      auto sample = apply(src, cfg, inv.seed, i);
      SampleManifest m;
      m.source = rel;
      m.root_seed = inv.seed;
      m.sample_index = i;
      m.config_digest = digest;
      m.plan = std::move(sample.plan);
      persist(out_root, i, sample.image, std::move(m), formats);
    });
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json summary = {
        {"samples", inv.count},
        {"elapsed_seconds", elapsed},
        {"samples_per_second", elapsed > 0.0 ? static_cast<double>(inv.count) / elapsed : 0.0}};
    out << summary.dump() << "\n";
    return kExitOk;
  });
}

/// Plan-only distribution report.
inline int cmd_stats(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require(inv.config, "--config", "stats");
    if (inv.count == 0) {
      throw ConfigError("stats requires --count > 0");
    }
    const auto cfg = load_config(inv.config);
    StatsOptions opt;
    opt.seed = inv.seed;
    opt.trials = inv.count;
    opt.workers = inv.workers;
    opt.channels = inv.source_channels;
    opt.height = inv.source_height;
    opt.width = inv.source_width;
    if (!inv.input.empty()) {
      const auto sources = scan_dataset(inv.input);
      if (!sources.empty()) {
        const auto first = decode((std::filesystem::path(inv.input) / sources.front()).string());
        opt.channels = first.channels();
        opt.height = first.height();
        opt.width = first.width();
      }
    }
    out << run_stats(cfg, opt).dump(2) << "\n";
    return kExitOk;
  });
}

/// Baseline RRC vs candidate timing report.
inline int cmd_bench(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require(inv.input, "--input", "bench");
    detail::require(inv.config, "--config", "bench");
    if (inv.mode != "rrc" && inv.mode != "cropmix") {
      throw ConfigError("--mode must be rrc or cropmix");
    }
    if (inv.count == 0) {
      throw ConfigError("bench requires --count > 0");
    }
    const auto cfg = load_config(inv.config);
    std::vector<std::string> sources;
    for (const auto& rel : scan_dataset(inv.input)) {
      sources.push_back((std::filesystem::path(inv.input) / rel).string());
    }
    BenchOptions opt;
    opt.seed = inv.seed;
    opt.count = inv.count;
    opt.workers = inv.workers;
    opt.candidate_is_rrc = inv.mode == "rrc";
    out << run_bench(sources, cfg, opt).dump(2) << "\n";
    return kExitOk;
  });
}

/**
 * Regenerates every sample_<i>.cmtx under --output from its manifest and
 * compares bytes. Exit 2 names the first mismatching sample.
 */
inline int cmd_replay(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require(inv.input, "--input", "replay");
    detail::require(inv.output, "--output", "replay");
    detail::require(inv.config, "--config", "replay");
    const auto cfg = load_config(inv.config);
    const std::string digest = config_digest(cfg);
    const std::filesystem::path in_root(inv.input);
    const std::filesystem::path out_root(inv.output);
    const auto manifests = detail::list_manifests(out_root);
    std::vector<char> matched(manifests.size(), 0);
    std::vector<std::string> reason(manifests.size());

    parallel_for(manifests.size(), inv.workers, [&](std::size_t k) {
      const auto m = load_manifest(manifests[k].second);
      if (m.config_digest != digest) {
        throw ConfigError(manifests[k].second.string() + " was produced with config digest " +
                          m.config_digest + ", current config is " + digest);
      }
      const auto raw = std::find_if(m.outputs.begin(), m.outputs.end(), [](const std::string& n) {
        return n.size() > 5 && n.compare(n.size() - 5, 5, ".cmtx") == 0;
      });
      if (raw == m.outputs.end()) {
        throw ConfigError(manifests[k].second.string() + " lists no raw tensor output");
      }
      const auto src = decode((in_root / m.source).string());
      const auto expected = encode_raw(replay(src, cfg, m.plan));
      std::vector<std::uint8_t> stored;
      try {
        stored = detail::read_bytes(out_root / *raw);
      } catch (const IoError& e) {
        reason[k] = e.what();
        return;
      }
      if (stored == expected) {
        matched[k] = 1;
      } else {
        const auto diff = std::mismatch(stored.begin(), stored.end(), expected.begin(),
                                        expected.end());
        reason[k] = "first differing byte at offset " +
                    std::to_string(std::distance(stored.begin(), diff.first));
      }
    });

    nlohmann::json samples = nlohmann::json::array();
    nlohmann::json mismatched = nlohmann::json::array();
    std::size_t ok = 0;
    for (std::size_t k = 0; k < manifests.size(); ++k) {
      nlohmann::json entry = {{"index", manifests[k].first}, {"match", matched[k] != 0}};
      if (!matched[k]) {
        entry["reason"] = reason[k];
        mismatched.push_back(manifests[k].first);
      } else {
        ++ok;
      }
      samples.push_back(entry);
    }
    nlohmann::json report = {{"checked", manifests.size()},
                             {"matched", ok},
                             {"mismatched", mismatched},
                             {"first_mismatch", mismatched.empty() ? nlohmann::json(nullptr)
                                                                   : mismatched.front()},
                             {"samples", samples}};
    out << report.dump(2) << "\n";
    if (!mismatched.empty()) {
      const auto first = mismatched.front().get<std::uint64_t>();
      err << "replay mismatch: " << sample_stem(first) << " ("
          << reason[std::distance(manifests.begin(),
                                  std::find_if(manifests.begin(), manifests.end(),
                                               [&](const auto& p) { return p.first == first; }))]
          << ")\n";
      return kExitMismatch;
    }
    return kExitOk;
  });
}

} // namespace cropmix::cli

#endif // CROPMIX_CLI_HPP_INCLUDED
