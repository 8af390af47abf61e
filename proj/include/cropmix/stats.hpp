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

#ifndef CROPMIX_STATS_HPP_INCLUDED
#define CROPMIX_STATS_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cropmix/config.hpp"
#include "cropmix/parallel.hpp"
#include "cropmix/pipeline.hpp"
#include "cropmix/rng.hpp"

namespace cropmix {

namespace detail {

struct Moments {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) noexcept {
    ++count;
    sum += v;
    sum_sq += v * v;
    min = std::min(min, v);
    max = std::max(max, v);
  }
  void merge(const Moments& o) noexcept {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    min = std::min(min, o.min);
    max = std::max(max, o.max);
  }
  double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }
  double variance() const noexcept {
    if (count == 0) return 0.0;
    const double m = mean();
    return std::max(0.0, sum_sq / static_cast<double>(count) - m * m);
  }
};

// Accumulator for one block of trials.
struct StatsBlock {
  std::map<std::size_t, std::size_t> n_hist;
  std::map<std::size_t, std::vector<Moments>> crop_area; // by N, per crop
  std::map<std::size_t, Moments> lambda_by_n;
  Moments effective_fraction;
  std::map<std::string, std::size_t> perm_hist;

  void merge(const StatsBlock& o) {
    for (const auto& [k, v] : o.n_hist) n_hist[k] += v;
    for (const auto& [n, v] : o.crop_area) {
      auto& dst = crop_area[n];
      dst.resize(std::max(dst.size(), v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) dst[i].merge(v[i]);
    }
    for (const auto& [n, m] : o.lambda_by_n) lambda_by_n[n].merge(m);
    effective_fraction.merge(o.effective_fraction);
    for (const auto& [k, v] : o.perm_hist) perm_hist[k] += v;
  }
};

inline std::string perm_key(const std::vector<std::size_t>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s;
}

} // namespace detail

struct StatsOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  std::size_t workers = 1;
  std::size_t channels = 3;
  std::size_t height = 512;
  std::size_t width = 512;
};

/**
 * Plan-only statistics over `trials` samples: N histogram, per-crop area
 * fractions, lambda moments against the closed-form Beta(a, a) moments,
 * CutMix effective fractions and the channel permutation histogram.
 * Blocks are merged in index order, so the report does not depend on the
 * worker count.
 */
inline nlohmann::json run_stats(const PipelineConfig& cfg, const StatsOptions& opt) {
  validate(cfg);
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (opt.trials + kBlock - 1) / kBlock;
  std::vector<detail::StatsBlock> acc(blocks);
  const double src_area = static_cast<double>(opt.width) * static_cast<double>(opt.height);

  parallel_for(blocks, opt.workers, [&](std::size_t b) {
    auto& blk = acc[b];
    const std::size_t end = std::min(opt.trials, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const auto plan =
          plan_sample(opt.channels, opt.height, opt.width, cfg, opt.seed, i);
      const std::size_t n = plan.num_crops;
      blk.n_hist[n] += 1;
      auto& areas = blk.crop_area[n];
      areas.resize(std::max(areas.size(), n));
      for (std::size_t k = 0; k < n; ++k) {
        areas[k].add(static_cast<double>(plan.crops[k].rect.area()) / src_area);
      }
      for (const auto& st : plan.chain.steps) {
        blk.lambda_by_n[n].add(st.lambda);
        if (st.box) {
          blk.effective_fraction.add(st.box->effective_fraction);
        }
        for (const auto& r : st.augments) {
          if (r.kind == AugmentKind::channel_permute) {
            blk.perm_hist[detail::perm_key(r.permutation)] += 1;
          }
        }
      }
      for (const auto& r : plan.chain.after) {
        if (r.kind == AugmentKind::channel_permute) {
          blk.perm_hist[detail::perm_key(r.permutation)] += 1;
        }
      }
    }
  });

  detail::StatsBlock total;
  for (const auto& blk : acc) {
    total.merge(blk);
  }

  nlohmann::json report;
  report["trials"] = opt.trials;
  report["seed"] = opt.seed;
  report["source_shape"] = {opt.channels, opt.height, opt.width};
  report["config"] = to_json(cfg);
  report["config_digest"] = config_digest(cfg);

  nlohmann::json n_hist = nlohmann::json::object();
  for (const auto& [n, c] : total.n_hist) n_hist[std::to_string(n)] = c;
  report["num_crops_histogram"] = n_hist;

  nlohmann::json parts = nlohmann::json::object();
  for (const auto& [n, areas] : total.crop_area) {
    const auto ranges = cfg.single_scale || cfg.baseline_rrc
                            ? std::vector<CropScaleRange>(n, cfg.crop_scale)
                            : partition_scale(cfg.crop_scale, n);
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t k = 0; k < areas.size(); ++k) {
      list.push_back({{"crop", k},
                      {"range", {ranges[k].lo, ranges[k].hi}},
                      {"count", areas[k].count},
                      {"area_min", areas[k].min},
                      {"area_mean", areas[k].mean()},
                      {"area_max", areas[k].max}});
    }
    parts[std::to_string(n)] = list;
  }
  report["crop_area"] = parts;

  detail::Moments pooled;
  double expected_var_weighted = 0.0;
  nlohmann::json by_n = nlohmann::json::object();
  for (const auto& [n, m] : total.lambda_by_n) {
    const double alpha = cfg.alpha_effective(n);
    const double ev = beta_symmetric_variance(alpha);
    by_n[std::to_string(n)] = {{"alpha", alpha},
                               {"count", m.count},
                               {"mean", m.mean()},
                               {"variance", m.variance()},
                               {"expected_mean", 0.5},
                               {"expected_variance", ev}};
    pooled.merge(m);
    expected_var_weighted += ev * static_cast<double>(m.count);
  }
  nlohmann::json lambda = {{"count", pooled.count},
                           {"mean", pooled.mean()},
                           {"variance", pooled.variance()},
                           {"expected_mean", 0.5},
                           {"by_num_crops", by_n}};
  // Every Beta(a, a) has mean 1/2, so the pooled variance is the
  // count-weighted average of the per-N variances.
  lambda["expected_variance"] =
      pooled.count ? expected_var_weighted / static_cast<double>(pooled.count) : 0.0;
  report["lambda"] = lambda;

  if (total.effective_fraction.count) {
    report["cutmix_effective_fraction"] = {{"count", total.effective_fraction.count},
                                           {"mean", total.effective_fraction.mean()}};
  } else {
    report["cutmix_effective_fraction"] = nullptr;
  }
  nlohmann::json perms = nlohmann::json::object();
  for (const auto& [k, c] : total.perm_hist) perms[k] = c;
  report["permutation_histogram"] = perms;
  return report;
}

} // namespace cropmix

#endif // CROPMIX_STATS_HPP_INCLUDED
