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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phasemc/noise.hpp"

using namespace phasemc;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // published Random123 vectors
  auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(out == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu});
  CHECK(out == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u});
  CHECK(out == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("keyed gaussian stream reproduces frozen draws") {
  // values pinned against an independent reference implementation
  const NoiseSampler s42(NoiseDist::kGaussian, 1.0, 42);
  CHECK(s42.unit_variate(7, 3) == doctest::Approx(1.1956819132873266).epsilon(1e-12));
  const NoiseSampler s1(NoiseDist::kGaussian, 1.0, 1);
  CHECK(s1.unit_variate(0, 0) == doctest::Approx(-0.4138978146527072).epsilon(1e-12));
  const NoiseSampler sbig(NoiseDist::kGaussian, 1.0, 123456789);
  CHECK(sbig.unit_variate(999, 100000) == doctest::Approx(0.9166788839273107).epsilon(1e-12));

  // init stream is bit-exact (no libm involved)
  CHECK(s42.init_uniform(7) == 0.5704531027706997);
  CHECK(s42.init_uniform(8) == 0.4017817600763386);
}

TEST_CASE("stream identity and reproducibility") {
  const NoiseSampler a(NoiseDist::kGaussian, 2.0, 777);
  const NoiseSampler b(NoiseDist::kGaussian, 2.0, 777);
  for (std::uint64_t t = 0; t < 5; ++t) {
    for (std::uint64_t k = 0; k < 5; ++k) {
      CHECK(a.xi(t, k) == b.xi(t, k));
    }
  }
  CHECK(a.xi(0, 0) != a.xi(1, 0));
  CHECK(a.xi(0, 0) != a.xi(0, 1));

  // the init stream never collides with the step stream
  CHECK(a.init_uniform(3) != a.xi(3, 0));

  const NoiseSampler other_seed(NoiseDist::kGaussian, 2.0, 778);
  CHECK(a.xi(0, 0) != other_seed.xi(0, 0));
}

TEST_CASE("gamma scaling keeps common random numbers across a sweep") {
  const NoiseSampler g0(NoiseDist::kGaussian, 0.0, 99);
  const NoiseSampler g1(NoiseDist::kGaussian, 1.0, 99);
  const NoiseSampler g4(NoiseDist::kGaussian, 4.0, 99);
  for (std::uint64_t t = 0; t < 4; ++t) {
    CHECK(g1.unit_variate(t, 5) == g4.unit_variate(t, 5));
    CHECK(g4.xi(t, 5) == doctest::Approx(2.0 * g1.xi(t, 5)).epsilon(1e-15));
    CHECK(g0.xi(t, 5) == 0.0);
  }
}

TEST_CASE("rademacher draws are +-sqrt(gamma)") {
  const double gamma = 2.25;
  const NoiseSampler s(NoiseDist::kRademacher, gamma, 4242);
  const double root = std::sqrt(gamma);
  int plus = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const double xi = s.xi(t, 0);
    CHECK((xi == root || xi == -root));
    if (xi > 0) ++plus;
  }
  CHECK(plus > 400);
  CHECK(plus < 600);
}

TEST_CASE("noise moments match mean zero, variance gamma") {
  const std::uint64_t n = 1000000;
  for (const NoiseDist dist : {NoiseDist::kGaussian, NoiseDist::kRademacher}) {
    const double gamma = 1.7;
    const NoiseSampler s(dist, gamma, 31337);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double xi = s.xi(i & 0xFFFF, i >> 16);
      sum += xi;
      sum_sq += xi * xi;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum_sq / static_cast<double>(n) - mean * mean;
    const double mean_sigma = std::sqrt(gamma / static_cast<double>(n));
    CHECK(std::abs(mean) <= 4.0 * mean_sigma);
    CHECK(var == doctest::Approx(gamma).epsilon(0.01));
  }
}

TEST_CASE("negative gamma is rejected") {
  CHECK_THROWS_AS(NoiseSampler(NoiseDist::kGaussian, -0.1, 0), std::invalid_argument);
}
