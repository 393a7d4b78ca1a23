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

#include "doctest.h"
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "lasas/arhead/head.hpp"
#include "lasas/errors.hpp"
#include "lasas/numerics/gradcheck.hpp"
#include "test_util.hpp"

using namespace lasas;
using namespace lasas::arhead;
using lasas::testing::random_matrix;
using numerics::Rng;

namespace {

// Mean and population std written out per column.
Matrix pool_oracle(const Matrix& x) {
  Matrix out(1, 2 * x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
    mean /= static_cast<double>(x.rows());
    double var = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= static_cast<double>(x.rows());
    out(0, c) = mean;
    out(0, x.cols() + c) = std::sqrt(var + 1e-9);
  }
  return out;
}

HeadConfig small_head() {
  HeadConfig c;
  c.context_layers = 1;
  c.context_dim = 8;
  c.heads = 2;
  c.ff_dim = 8;
  c.dnn_layers = 2;
  c.num_accents = 3;
  return c;
}

}  // namespace

TEST_CASE("DNN widths halve") {
  HeadConfig c;
  CHECK(c.dnn_widths() == std::vector<std::size_t>{16, 8, 4});
  CHECK(c.pooled_dim() == 8);
  c.context_dim = 36;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.context_dim = 32;
  c.heads = 5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.heads = 4;
  c.num_accents = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("stat_pool formula") {
  const Matrix p = stat_pool(Matrix{{1, 3}, {3, 5}});
  CHECK(p(0, 0) == 2.0);
  CHECK(p(0, 1) == 4.0);
  CHECK(p(0, 2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p(0, 3) == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = random_matrix(1 + rng() % 12, 1 + rng() % 6, rng, 4.0);
    CHECK(numerics::max_abs_diff(stat_pool(x), pool_oracle(x)) <= 1e-10);
  }
}

TEST_CASE("stat_pool is permutation invariant and masks padding") {
  Rng rng(2);
  const Matrix x = random_matrix(6, 3, rng);
  Matrix rev(6, 3);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 3; ++c) rev(5 - r, c) = x(r, c);
  CHECK(numerics::max_abs_diff(stat_pool(x), stat_pool(rev)) <= 1e-12);

  Matrix prefix(4, 3);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 3; ++c) prefix(r, c) = x(r, c);
  CHECK(numerics::max_abs_diff(stat_pool(x, {1, 1, 1, 1, 0, 0}), stat_pool(prefix)) <= 1e-12);
  CHECK_THROWS(stat_pool(x, {0, 0, 0, 0, 0, 0}));
}

TEST_CASE("stat_pool single frame and constant rows") {
  const Matrix one{{0.5, -2.0, 7.0}};
  const Matrix p = stat_pool(one);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(p(0, c) == one(0, c));
    CHECK(p(0, 3 + c) <= 1e-4);
  }
  const Matrix q = stat_pool(Matrix{{1, 2}, {1, 2}, {1, 2}});
  CHECK(q(0, 0) == 1.0);
  CHECK(q(0, 1) == 2.0);
  CHECK(q(0, 2) <= 1e-4);
  CHECK(q(0, 3) <= 1e-4);
}

TEST_CASE("cross entropy, prediction and accuracy") {
  CHECK(cross_entropy(Matrix{{0, 0, 0, 0}}, 2) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(cross_entropy(Matrix{{0, 800, 0}}, 1) <= 1e-12);
  CHECK_THROWS(cross_entropy(Matrix{{0, 0}}, 2));

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix l = random_matrix(1, 5, rng, 3.0);
    const std::size_t before = predict(l);
    for (Real& v : l.values()) v += 17.25;
    CHECK(predict(l) == before);
  }
  CHECK(predict(Matrix{{1, 3, 3}}) == 1);
  CHECK(accuracy({0, 1, 2}, {0, 1, 2}) == 1.0);
  CHECK(accuracy({0, 1, 2, 2}, {0, 1, 0, 0}) == 0.5);
  CHECK(accuracy({}, {}) == 0.0);
  CHECK_THROWS_AS(accuracy({0}, {0, 1}), DimensionError);
}

TEST_CASE("head forward shapes and errors") {
  Rng rng(4);
  AccentHead head(small_head(), 5, rng);
  Tape tape;
  Var pooled;
  const Var logits = head.forward(tape, tape.constant(random_matrix(7, 5, rng)), {}, &pooled);
  CHECK(tape.value(logits).shape_str() == "1x3");
  CHECK(tape.value(pooled).shape_str() == "1x4");
  CHECK_THROWS_AS(head.forward(tape, tape.constant(Matrix(3, 4))), DimensionError);
  CHECK_THROWS_AS(head.forward(tape, tape.constant(Matrix(3, 5)), {0, 0, 0}), DimensionError);
}

TEST_CASE("head padding does not change logits") {
  Rng rng(5);
  AccentHead head(small_head(), 4, rng);
  Matrix x = random_matrix(6, 4, rng);
  Tape t1;
  const Matrix a = t1.value(head.forward(t1, t1.constant(x), {1, 1, 1, 1, 1, 0}));
  for (std::size_t c = 0; c < 4; ++c) x(5, c) = 50.0;
  Tape t2;
  const Matrix b = t2.value(head.forward(t2, t2.constant(x), {1, 1, 1, 1, 1, 0}));
  CHECK(numerics::max_abs_diff(a, b) <= 1e-12);
}

TEST_CASE("head gradients pass the finite-difference check") {
  Rng rng(6);
  AccentHead head(small_head(), 4, rng);
  numerics::Param x("x", random_matrix(5, 4, rng));
  ParamList params;
  head.collect(params);
  params.push_back(&x);
  const auto r = numerics::finite_diff_check(
      [&](Tape& t) { return t.cross_entropy(head.forward(t, t.param(x), {1, 1, 1, 1, 0}), 2); }, params);
  CHECK(r.max_rel_error <= 1e-5);
}

TEST_CASE("variant names round trip") {
  for (auto v : {SystemVariant::kAcousticOnly, SystemVariant::kDirectConcat, SystemVariant::kLasas})
    CHECK(variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(variant_from_string("fusion"), ConfigError);
  const HeadConfig c = HeadConfig::from_json(small_head().to_json());
  CHECK(c.context_dim == 8);
  CHECK(c.num_accents == 3);
}
