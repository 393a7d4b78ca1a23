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

#include <cstddef>
#include <vector>

#include "lasas/numerics/matrix.hpp"
#include "lasas/tokenizer/bpe.hpp"

namespace lasas::tokenizer {

/// One aligned pronunciation unit: a subword held for `duration` frames.
struct SubwordSegment {
  SubwordId subword_id = kSilenceId;
  std::size_t duration = 1;

  friend bool operator==(const SubwordSegment&, const SubwordSegment&) = default;
};

/// Frame-level id stream: segment s contributes `duration` copies of its id.
std::vector<SubwordId> expand_alignment(const std::vector<SubwordSegment>& segments);

/// T×vocab_size one-hot matrix of a frame stream.
numerics::Matrix one_hot(const std::vector<SubwordId>& frame_ids, std::size_t vocab_size);

}  // namespace lasas::tokenizer
