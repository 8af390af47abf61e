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

#ifndef CROPMIX_BENCH_HPP_INCLUDED
#define CROPMIX_BENCH_HPP_INCLUDED

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropmix/config.hpp"
#include "cropmix/image_codec.hpp"
#include "cropmix/parallel.hpp"
#include "cropmix/pipeline.hpp"
#include "cropmix/raw_tensor.hpp"

namespace cropmix {

struct BenchOptions {
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  std::size_t workers = 1;
  bool candidate_is_rrc = false; // compare the baseline against itself
  std::size_t warmup = 16;
};

struct BenchRun {
  std::vector<double> latency; // seconds per sample: decode..encode
  std::vector<double> transform; // seconds per sample: crop + resize + mix
  StageTimes stages;
  double wall = 0.0;
};

namespace detail {

inline double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(
      std::clamp(std::ceil(q * static_cast<double>(v.size())) - 1.0, 0.0,
                 static_cast<double>(v.size() - 1)));
  return v[idx];
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline BenchRun bench_config(const std::vector<std::string>& sources,
                             const PipelineConfig& cfg, const BenchOptions& opt,
                             std::size_t count) {
  BenchRun run;
  run.latency.resize(count);
  run.transform.resize(count);
  std::vector<StageTimes> per(count);
  const auto start = std::chrono::steady_clock::now();
  parallel_for(count, opt.workers, [&](std::size_t i) {
    StageTimes& t = per[i];
    ImageTensor src;
    {
      StageClock clock(&t.decode);
      src = decode(sources[i % sources.size()]);
    }
    auto sample = apply(src, cfg, opt.seed, i, &t);
    {
      StageClock clock(&t.encode);
      auto bytes = encode_raw(sample.image);
      if (bytes.empty()) throw Error("empty encoding");
    }
    run.latency[i] = t.total();
    run.transform[i] = t.crop + t.resize + t.mix;
  });
  run.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& t : per) run.stages += t;
  return run;
}

inline nlohmann::json run_json(const BenchRun& r) {
  const double total = r.stages.total();
  auto share = [&](double v) { return total > 0.0 ? 100.0 * v / total : 0.0; };
  return {{"samples", r.latency.size()},
          {"wall_seconds", r.wall},
          {"samples_per_second", r.wall > 0.0 ? static_cast<double>(r.latency.size()) / r.wall : 0.0},
          {"latency_mean_ms", 1e3 * mean_of(r.latency)},
          {"latency_p50_ms", 1e3 * percentile(r.latency, 0.50)},
          {"latency_p99_ms", 1e3 * percentile(r.latency, 0.99)},
          {"transform_mean_ms", 1e3 * mean_of(r.transform)},
          {"stage_share_percent",
           {{"decode", share(r.stages.decode)},
            {"crop", share(r.stages.crop)},
            {"resize", share(r.stages.resize)},
            {"mix", share(r.stages.mix)},
            {"encode", share(r.stages.encode)}}}};
}

} // namespace detail

/**
 * Times the baseline RRC form of `cfg` against the candidate (CropMix as
 * configured, or the baseline again) over the same sources, sample indices
 * and worker count. Overhead is the ratio of mean per-sample latencies.
 */
inline nlohmann::json run_bench(const std::vector<std::string>& sources,
                                const PipelineConfig& cfg, const BenchOptions& opt) {
  if (sources.empty()) {
    throw ParameterError("bench needs at least one source image");
  }
  validate(cfg);
  PipelineConfig baseline = cfg;
  baseline.baseline_rrc = true;
  PipelineConfig candidate = cfg;
  if (opt.candidate_is_rrc) {
    candidate.baseline_rrc = true;
  }
  if (opt.warmup > 0) {
    detail::bench_config(sources, baseline, opt, opt.warmup);
    detail::bench_config(sources, candidate, opt, opt.warmup);
  }
  const auto base = detail::bench_config(sources, baseline, opt, opt.count);
  const auto cand = detail::bench_config(sources, candidate, opt, opt.count);
  const double base_mean = detail::mean_of(base.latency);
  const double cand_mean = detail::mean_of(cand.latency);
  const double base_tf = detail::mean_of(base.transform);
  const double cand_tf = detail::mean_of(cand.transform);
  return {{"count", opt.count},
          {"workers", opt.workers},
          {"mode", opt.candidate_is_rrc ? "rrc" : "cropmix"},
          {"resolution", cfg.resolution},
          {"baseline", detail::run_json(base)},
          {"candidate", detail::run_json(cand)},
          {"overhead_ratio", base_mean > 0.0 ? cand_mean / base_mean : 0.0},
          {"transform_overhead_ratio", base_tf > 0.0 ? cand_tf / base_tf : 0.0}};
}

} // namespace cropmix

#endif // CROPMIX_BENCH_HPP_INCLUDED
