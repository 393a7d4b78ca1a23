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

#include "lasas/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lasas/errors.hpp"
#include "lasas/numerics/random.hpp"

namespace lasas::numerics {

namespace {

Real eval_loss(const LossBuilder& loss_fn) {
  Tape tape;
  const Real loss = tape.scalar(loss_fn(tape));
  if (!std::isfinite(loss)) throw NumericError("finite_diff_check: non-finite loss");
  return loss;
}

std::vector<std::size_t> pick_coords(std::size_t n, std::size_t want, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n <= want) return idx;
  // Partial Fisher-Yates; deterministic given rng.
  for (std::size_t i = 0; i < want; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(want);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

GradCheckResult finite_diff_check(const LossBuilder& loss_fn, const ParamList& params,
                                  const GradCheckOptions& opts) {
  zero_grads(params);
  {
    Tape tape;
    const Var loss = loss_fn(tape);
    if (!std::isfinite(tape.scalar(loss))) throw NumericError("finite_diff_check: non-finite loss");
    tape.backward(loss);
  }

  Rng rng(opts.seed);
  GradCheckResult result;
  for (Param* p : params) {
    ParamCheck check{p->name};
    for (std::size_t i : pick_coords(p->value.size(), opts.coords_per_param, rng)) {
      Real& w = p->value.data()[i];
      const Real saved = w;
      w = saved + opts.step;
      const Real up = eval_loss(loss_fn);
      w = saved - opts.step;
      const Real down = eval_loss(loss_fn);
      w = saved;
      const Real fd = (up - down) / (2.0 * opts.step);
      const Real bp = p->grad.data()[i];
      const Real err = std::abs(fd - bp) / std::max({1.0, std::abs(fd), std::abs(bp)});
      if (err > check.max_rel_error) {
        check.max_rel_error = err;
        check.worst_index = i;
      }
      ++check.coords;
    }
    if (check.max_rel_error > result.max_rel_error || result.worst_param.empty()) {
      result.max_rel_error = check.max_rel_error;
      result.worst_param = check.name;
    }
    result.per_param.push_back(std::move(check));
  }
  return result;
}

}  // namespace lasas::numerics
