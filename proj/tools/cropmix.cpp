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

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cropmix/cli.hpp"

int main(int argc, char** argv) {
  using namespace cropmix::cli;
  CLI::App app{"cropmix: multi-scale crop and mix preprocessing"};
  app.require_subcommand(1);
  Invocation inv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", inv.config, "pipeline config file");
    sub->add_option("--seed", inv.seed, "root seed (64-bit unsigned)");
    sub->add_option("--workers", inv.workers, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* sample = app.add_subcommand("sample", "write augmented samples and manifests");
  add_common(sample);
  sample->add_option("--input", inv.input, "source image directory");
  sample->add_option("--output", inv.output, "output directory");
  sample->add_option("--count", inv.count, "number of samples");
  sample->add_option("--formats", inv.formats, "comma-separated subset of png,raw");

  auto* stats = app.add_subcommand("stats", "plan-only distribution report");
  add_common(stats);
  stats->add_option("--count", inv.count, "number of trials");
  stats->add_option("--input", inv.input, "optional source directory (first image sets the shape)");
  stats->add_option("--source-width", inv.source_width, "source width without --input");
  stats->add_option("--source-height", inv.source_height, "source height without --input");
  stats->add_option("--source-channels", inv.source_channels, "source channels without --input");

  auto* bench = app.add_subcommand("bench", "time baseline RRC against the configured pipeline");
  add_common(bench);
  bench->add_option("--input", inv.input, "source image directory");
  bench->add_option("--count", inv.count, "samples per configuration");
  bench->add_option("--mode", inv.mode, "candidate: rrc|cropmix")
      ->check(CLI::IsMember({"rrc", "cropmix"}));

  auto* rep = app.add_subcommand("replay", "verify stored raw outputs against their manifests");
  add_common(rep);
  rep->add_option("--input", inv.input, "source image directory");
  rep->add_option("--output", inv.output, "directory holding sample_<i> files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*sample) return cmd_sample(inv, std::cout, std::cerr);
  if (*stats) return cmd_stats(inv, std::cout, std::cerr);
  if (*bench) return cmd_bench(inv, std::cout, std::cerr);
  return cmd_replay(inv, std::cout, std::cerr);
}
