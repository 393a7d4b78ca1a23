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

#include "lasas/tokenizer/alignment.hpp"

#include <string>

#include "lasas/errors.hpp"

namespace lasas::tokenizer {

std::vector<SubwordId> expand_alignment(const std::vector<SubwordSegment>& segments) {
  if (segments.empty()) throw ConfigError("expand_alignment: no segments");
  std::vector<SubwordId> frames;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    if (seg.duration == 0) {
      throw ConfigError("expand_alignment: segment " + std::to_string(i) + " has zero duration");
    }
    frames.insert(frames.end(), seg.duration, seg.subword_id);
  }
  return frames;
}

numerics::Matrix one_hot(const std::vector<SubwordId>& frame_ids, std::size_t vocab_size) {
  numerics::Matrix out(frame_ids.size(), vocab_size);
  for (std::size_t t = 0; t < frame_ids.size(); ++t) {
    if (frame_ids[t] >= vocab_size) {
      throw DimensionError("one_hot: id " + std::to_string(frame_ids[t]) + " out of range for D2=" +
                           std::to_string(vocab_size));
    }
    out(t, frame_ids[t]) = 1.0;
  }
  return out;
}

}  // namespace lasas::tokenizer
