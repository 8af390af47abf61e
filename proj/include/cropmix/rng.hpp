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

#ifndef CROPMIX_RNG_HPP_INCLUDED
#define CROPMIX_RNG_HPP_INCLUDED

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "cropmix/errors.hpp"

namespace cropmix {

namespace detail {

// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

} // namespace detail

/**
 * Deterministic random stream owned by one sample.
 *
 * The generator is xoshiro256**. Its state is derived from the
 * (root_seed, sample_index) lineage by a keyed mix, so stream i never depends
 * on how many draws other streams consumed.
 */
class RngStream {
public:
  RngStream(std::uint64_t root_seed, std::uint64_t sample_index) noexcept
      : root_seed_(root_seed), sample_index_(sample_index) {
    // Two rounds of keyed mixing decorrelate neighbouring seeds and indices.
    std::uint64_t key = detail::mix64(root_seed ^ 0x6A09E667F3BCC909ULL);
    key = detail::mix64(key ^ detail::mix64(sample_index + 0x9E3779B97F4A7C15ULL));
    std::uint64_t sm = key;
    for (auto& word : state_) {
      sm += 0x9E3779B97F4A7C15ULL;
      word = detail::mix64(sm);
    }
  }

  std::uint64_t root_seed() const noexcept { return root_seed_; }
  std::uint64_t sample_index() const noexcept { return sample_index_; }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1); safe to take logs of.
  double uniform_open01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless rejection.
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via the Marsaglia polar method (spare discarded).
  double normal() noexcept {
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

private:
  std::uint64_t root_seed_;
  std::uint64_t sample_index_;
  std::array<std::uint64_t, 4> state_{};
};

/// Keyed split: the stream for one sample of a run.
inline RngStream split(std::uint64_t root_seed, std::uint64_t sample_index) noexcept {
  return RngStream(root_seed, sample_index);
}

/// Symmetric Beta(alpha, alpha) shape.
struct BetaParams {
  double alpha = 1.0;
};

/// Uniform on [lo, hi). lo == hi returns lo.
inline double sample_uniform_range(RngStream& s, double lo, double hi) {
  if (!(lo <= hi)) {
    throw ParameterError("uniform range requires lo <= hi, got [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  if (lo == hi) {
    return lo;
  }
  const double v = lo + (hi - lo) * s.uniform01();
  return v < hi ? v : std::nextafter(hi, lo);
}

/**
 * log of a Gamma(shape, 1) variate.
 *
 * Marsaglia-Tsang squeeze/rejection for shape >= 1. For shape < 1 the
 * boost G(a) = G(a + 1) * U^(1/a) is applied in log space: with shapes near
 * 0.08 the linear-space value underflows to zero for a sizeable fraction of
 * draws, but its logarithm stays finite.
 */
inline double sample_log_gamma(RngStream& s, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw ParameterError("gamma shape must be positive, got " +
                         std::to_string(shape));
  }
  double boost = 0.0;
  if (shape < 1.0) {
    boost = std::log(s.uniform_open01()) / shape;
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = s.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = s.uniform_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d) + std::log(v) + boost;
    }
  }
}

/// lambda ~ Beta(alpha, alpha) as G1 / (G1 + G2), evaluated from log-gammas.
inline double sample_beta(RngStream& s, BetaParams p) {
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw ParameterError("beta alpha must be positive, got " +
                         std::to_string(p.alpha));
  }
  const double lg1 = sample_log_gamma(s, p.alpha);
  const double lg2 = sample_log_gamma(s, p.alpha);
  // G1/(G1+G2) = 1/(1 + exp(lg2 - lg1)); saturates cleanly to 0 or 1.
  const double lambda = 1.0 / (1.0 + std::exp(lg2 - lg1));
  return lambda < 0.0 ? 0.0 : (lambda > 1.0 ? 1.0 : lambda);
}

/// Closed-form variance of Beta(alpha, alpha).
constexpr double beta_symmetric_variance(double alpha) noexcept {
  return 1.0 / (4.0 * (2.0 * alpha + 1.0));
}

} // namespace cropmix

#endif // CROPMIX_RNG_HPP_INCLUDED
