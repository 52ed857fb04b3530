// Copyright 2026 The phasemc Authors
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

#include "phasemc/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasemc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// counter layout: (traj_lo, traj_hi, step_lo, step_hi | purpose<<30)
inline std::array<std::uint32_t, 4> make_counter(std::uint64_t trajectory, std::uint64_t step,
                                                 std::uint32_t purpose) {
  return {static_cast<std::uint32_t>(trajectory), static_cast<std::uint32_t>(trajectory >> 32),
          static_cast<std::uint32_t>(step),
          (static_cast<std::uint32_t>(step >> 32) & 0x3FFFFFFFu) | (purpose << 30)};
}

inline std::array<std::uint32_t, 2> make_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// 53-bit mantissa from two 32-bit words
inline double unit_open_closed(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;  // (0,1], safe for log
}

inline double unit_closed_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0,1)
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, counter[0], hi0, lo0);
    mulhilo(kPhiloxM1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

NoiseSampler::NoiseSampler(NoiseDist dist, double gamma, std::uint64_t seed)
    : dist_(dist), gamma_(gamma), seed_(seed) {
  if (gamma < 0.0) {
    throw std::invalid_argument("NoiseSampler: gamma must be non-negative");
  }
}

double NoiseSampler::unit_variate(std::uint64_t trajectory, std::uint64_t step) const {
  const auto w = philox4x32_10(make_counter(trajectory, step, 0), make_key(seed_));
  if (dist_ == NoiseDist::kRademacher) {
    return (w[0] & 1u) ? 1.0 : -1.0;
  }
  // Box-Muller from one Philox block
  const double u1 = unit_open_closed(w[0], w[1]);
  const double u2 = unit_closed_open(w[2], w[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseSampler::xi(std::uint64_t trajectory, std::uint64_t step) const {
  if (gamma_ == 0.0) return 0.0;
  return std::sqrt(gamma_) * unit_variate(trajectory, step);
}

double NoiseSampler::init_uniform(std::uint64_t trajectory) const {
  const auto w = philox4x32_10(make_counter(trajectory, 0, 1), make_key(seed_));
  return unit_closed_open(w[0], w[1]);
}

}  // namespace phasemc
