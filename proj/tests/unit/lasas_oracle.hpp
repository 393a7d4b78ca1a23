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
#include <vector>

#include "lasas/numerics/matrix.hpp"

namespace lasas::testing {

// Per-frame, per-space, per-dimension loops straight from the definition:
//   S[t][i] = sum_c (sum_k Xa[t][k] Wa_i[k][c]) (sum_k Xt[t][k] Wt_i[k][c]) / sqrt(C/N)
inline numerics::Matrix naive_shift(const numerics::Matrix& xa, const numerics::Matrix& xt,
                                    const std::vector<numerics::Matrix>& wa, const std::vector<numerics::Matrix>& wt,
                                    double hidden_dim) {
  const std::size_t n = wa.size();
  const double scale = std::sqrt(hidden_dim / static_cast<double>(n));
  numerics::Matrix s(xa.rows(), n);
  for (std::size_t t = 0; t < xa.rows(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t c = 0; c < wa[i].cols(); ++c) {
        double va = 0.0;
        for (std::size_t k = 0; k < xa.cols(); ++k) va += xa(t, k) * wa[i](k, c);
        double vt = 0.0;
        for (std::size_t k = 0; k < xt.cols(); ++k) vt += xt(t, k) * wt[i](k, c);
        dot += va * vt;
      }
      s(t, i) = dot / scale;
    }
  }
  return s;
}

}  // namespace lasas::testing
