// Copyright 2026 The LASAS Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "lasas/numerics/matrix.hpp"

namespace lasas::numerics {

/// All randomness in the project goes through this engine (64-bit Mersenne
/// Twister). Distributions come from <random>, so streams are reproducible
/// within one standard library build.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes a tuple of integers into a seed; order-sensitive.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

inline Real uniform(Rng& rng, Real lo, Real hi) {
  return std::uniform_real_distribution<Real>(lo, hi)(rng);
}

inline Real gaussian(Rng& rng, Real stddev) {
  return std::normal_distribution<Real>(0.0, stddev)(rng);
}

/// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)); fan_in = rows.
Matrix xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng);

Matrix uniform_matrix(std::size_t rows, std::size_t cols, Real lo, Real hi, Rng& rng);

}  // namespace lasas::numerics
