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

#include <cmath>

#include "lasas/encoder/encoder.hpp"
#include "lasas/errors.hpp"
#include "lasas/numerics/gradcheck.hpp"
#include "test_util.hpp"

using namespace lasas;
using namespace lasas::encoder;
using lasas::testing::random_matrix;

namespace {

EncoderConfig small_config(std::size_t layers, std::size_t d_model, std::vector<std::size_t> taps) {
  EncoderConfig c;
  c.num_layers = layers;
  c.d_model = d_model;
  c.heads = 2;
  c.ff_dim = 2 * d_model;
  c.taps = std::move(taps);
  return c;
}

}  // namespace

TEST_CASE("layer outputs have shape T x d_model") {
  Rng rng(3);
  AcousticEncoder enc(small_config(3, 16, {1, 3}), 5, rng);
  Tape tape;
  const auto outs = enc.encode(tape, random_matrix(10, 5, rng), {});
  REQUIRE(outs.size() == 3);
  for (Var v : outs) CHECK(tape.value(v).shape_str() == "10x16");
  CHECK(tape.value(tap_concat(tape, outs, enc.config().taps)).shape_str() == "10x32");
}

TEST_CASE("a single tap is the identity on that layer") {
  Rng rng(4);
  AcousticEncoder enc(small_config(1, 8, {1}), 3, rng);
  Tape tape;
  const auto outs = enc.encode(tape, random_matrix(4, 3, rng), {});
  CHECK(tape.value(tap_concat(tape, outs, {1})) == tape.value(outs[0]));
}

TEST_CASE("tap concatenation widths and ordering") {
  Rng rng(5);
  AcousticEncoder enc(small_config(12, 16, {3, 6, 9}), 4, rng);
  CHECK(enc.config().embedding_dim() == 48);
  Tape tape;
  const auto outs = enc.encode(tape, random_matrix(3, 4, rng), {});
  const Matrix cat = tape.value(tap_concat(tape, outs, {9, 3, 6}));
  REQUIRE(cat.shape_str() == "3x48");
  // ascending tap order regardless of how the set was written
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t j = 0; j < 16; ++j) {
      CHECK(cat(t, j) == tape.value(outs[2])(t, j));
      CHECK(cat(t, 16 + j) == tape.value(outs[5])(t, j));
      CHECK(cat(t, 32 + j) == tape.value(outs[8])(t, j));
    }
  std::vector<std::size_t> all(12);
  for (std::size_t i = 0; i < 12; ++i) all[i] = i + 1;
  CHECK(tape.value(tap_concat(tape, outs, all)).cols() == 12 * 16);
  CHECK_THROWS_AS(tap_concat(tape, outs, {13}), ConfigError);
  CHECK_THROWS_AS(tap_concat(tape, outs, {0}), ConfigError);
}

TEST_CASE("attention rows sum to one over unmasked keys") {
  Rng rng(6);
  AcousticEncoder enc(small_config(2, 8, {2}), 3, rng);
  Tape tape;
  const FrameMask mask{1, 1, 1, 0, 0};
  std::vector<Matrix> attn;
  enc.encode(tape, random_matrix(5, 3, rng), mask, &attn);
  REQUIRE(attn.size() == 2 * 2);
  for (const Matrix& a : attn) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      Real s = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) {
        if (mask[c] == 0) CHECK(a(r, c) == 0.0);
        s += a(r, c);
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("padded frames do not influence unmasked rows") {
  Rng rng(7);
  AcousticEncoder enc(small_config(3, 8, {1, 2, 3}), 4, rng);
  Matrix x = random_matrix(6, 4, rng);
  const FrameMask mask{1, 1, 1, 1, 0, 0};
  Tape t1;
  const Matrix a = t1.value(tap_concat(t1, enc.encode(t1, x, mask), enc.config().taps));
  for (std::size_t r = 4; r < 6; ++r)
    for (std::size_t c = 0; c < 4; ++c) x(r, c) = 100.0 * (r + c + 1);
  Tape t2;
  const Matrix b = t2.value(tap_concat(t2, enc.encode(t2, x, mask), enc.config().taps));
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) CHECK(std::abs(a(r, c) - b(r, c)) <= 1e-12);

  // and the unpadded prefix gives the same rows
  Matrix prefix(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) prefix(r, c) = x(r, c);
  Tape t3;
  const Matrix p = t3.value(tap_concat(t3, enc.encode(t3, prefix, {}), enc.config().taps));
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) CHECK(std::abs(a(r, c) - p(r, c)) <= 1e-12);
}

TEST_CASE("encoder gradients pass the finite-difference check") {
  Rng rng(8);
  AcousticEncoder enc(small_config(2, 8, {1, 2}), 3, rng);
  const Matrix x = random_matrix(5, 3, rng);
  const Matrix probe = random_matrix(5, 16, rng);
  ParamList params;
  enc.collect(params);
  const auto result = numerics::finite_diff_check(
      [&](Tape& t) {
        const Var e = tap_concat(t, enc.encode(t, x, FrameMask{1, 1, 1, 1, 0}), enc.config().taps);
        return t.sum(t.mul(e, t.constant(probe)));
      },
      params);
  CHECK(result.max_rel_error <= 1e-5);
}

TEST_CASE("encoder configuration and input errors") {
  Rng rng(9);
  CHECK_THROWS_AS(small_config(2, 9, {1}).validate(), ConfigError);  // 9 % 2
  CHECK_THROWS_AS(small_config(2, 8, {}).validate(), ConfigError);
  CHECK_THROWS_AS(small_config(2, 8, {3}).validate(), ConfigError);
  CHECK_THROWS_AS(small_config(2, 8, {1, 1}).validate(), ConfigError);
  AcousticEncoder enc(small_config(1, 8, {1}), 3, rng);
  Tape tape;
  CHECK_THROWS_AS(enc.encode(tape, Matrix(0, 3), {}), DimensionError);
  CHECK_THROWS_AS(enc.encode(tape, Matrix(2, 4), {}), DimensionError);
}

TEST_CASE("encoder config json round trip") {
  const EncoderConfig c = small_config(4, 16, {2, 4});
  const EncoderConfig d = EncoderConfig::from_json(c.to_json());
  CHECK(d.num_layers == 4);
  CHECK(d.d_model == 16);
  CHECK(d.taps == std::vector<std::size_t>{2, 4});
}
