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

#include "lasas/numerics/random.hpp"

#include <cmath>

namespace lasas::numerics {

Matrix uniform_matrix(std::size_t rows, std::size_t cols, Real lo, Real hi, Rng& rng) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<Real> dist(lo, hi);
  for (Real& v : m.values()) v = dist(rng);
  return m;
}

Matrix xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const Real limit = std::sqrt(6.0 / static_cast<Real>(rows + cols));
  return uniform_matrix(rows, cols, -limit, limit, rng);
}

}  // namespace lasas::numerics
