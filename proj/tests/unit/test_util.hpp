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

#include <cmath>
#include <cstdint>

#include "lasas/numerics/matrix.hpp"
#include "lasas/numerics/random.hpp"

namespace lasas::testing {

using numerics::Matrix;
using numerics::Real;
using numerics::Rng;

inline Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, Real scale = 1.0) {
  return numerics::uniform_matrix(r, c, -scale, scale, rng);
}

inline Matrix random_int_matrix(std::size_t r, std::size_t c, Rng& rng, int lo = -9, int hi = 9) {
  Matrix m(r, c);
  std::uniform_int_distribution<int> d(lo, hi);
  for (Real& v : m.values()) v = d(rng);
  return m;
}

// Triple-loop reference product, written independently of the Eigen-backed kernel.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Real acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace lasas::testing
