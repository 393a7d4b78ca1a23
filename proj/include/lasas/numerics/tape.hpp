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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lasas/numerics/matrix.hpp"
#include "lasas/numerics/param.hpp"

namespace lasas::numerics {

/// Per-row validity flags (1 = real frame, 0 = padding). An empty mask means
/// every row is valid.
using FrameMask = std::vector<std::uint8_t>;

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = static_cast<std::size_t>(-1);
  bool valid() const { return id != static_cast<std::size_t>(-1); }
};

enum class OpKind : std::uint8_t {
  kConstant,
  kParam,
  kMatMul,
  kAdd,
  kAddRow,
  kMul,
  kScale,
  kRelu,
  kSoftmaxRows,
  kLayerNorm,
  kRowwiseScaledDot,
  kConcatCols,
  kSliceCols,
  kTranspose,
  kStatPool,
  kCrossEntropy,
  kSum,
};

std::string_view op_name(OpKind kind);

/// Records differentiable operations in execution order. `backward` walks the
/// record in reverse, accumulating into node gradients and, for param leaves,
/// into Param::grad. A tape is single-use: build, backward, discard.
class Tape {
 public:
  static constexpr Real kLayerNormEps = 1e-5;
  static constexpr Real kStatPoolEps = 1e-9;

  Var constant(Matrix value);
  /// Leaf bound to a Param; the Param must outlive the tape.
  Var param(Param& p);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  /// a (T×c) + row (1×c) broadcast over rows.
  Var add_row(Var a, Var row);
  /// Element-wise product.
  Var mul(Var a, Var b);
  Var scale(Var a, Real s);
  Var relu(Var a);
  /// Row softmax. Columns whose key_mask entry is 0 get weight exactly 0.
  Var softmax_rows(Var a, const FrameMask& key_mask = {});
  Var layer_norm(Var a, Var gain, Var bias);
  /// out[t] = <a[t], b[t]> / sqrt(d_k), shape T×1.
  Var rowwise_scaled_dot(Var a, Var b, Real d_k);
  Var concat_cols(std::span<const Var> parts);
  Var slice_cols(Var a, std::size_t begin, std::size_t width);
  Var transpose(Var a);
  /// Mean ⊕ population std over valid rows, 1×2d.
  Var stat_pool(Var a, const FrameMask& mask = {});
  /// -log softmax(logits)[label] for a 1×K logits row; 1×1.
  Var cross_entropy(Var logits, std::size_t label);
  /// Sum of all entries, 1×1.
  Var sum(Var a);

  const Matrix& value(Var v) const;
  /// Gradient of the last backward root with respect to v (zeros if none).
  const Matrix& grad(Var v) const;
  Real scalar(Var v) const;

  std::size_t size() const { return nodes_.size(); }
  OpKind kind(Var v) const;

  /// Seeds d(root) = seed (root must be 1×1) and runs the tape in reverse.
  void backward(Var root, Real seed = 1.0);
  /// Backward from the most recent node; no-op on an empty tape.
  void backward();

  /// Node ids in the order the last backward pass processed them.
  const std::vector<std::size_t>& backward_trace() const { return trace_; }

 private:
  struct Node {
    OpKind kind = OpKind::kConstant;
    std::size_t in0 = 0;
    std::size_t in1 = 0;
    std::size_t in2 = 0;
    Matrix value;
    Matrix grad;
    Param* param = nullptr;
    bool needs_grad = false;
    Real scalar = 0.0;
    std::size_t index = 0;
    std::vector<std::size_t> inputs;  // concat parts
    FrameMask mask;
    Matrix cache;   // normalized activations (layer_norm), probabilities (cross_entropy)
    Matrix cache2;  // per-row inverse std for layer_norm, std for stat_pool
  };

  static Node make_node(OpKind kind, std::size_t in0 = 0, std::size_t in1 = 0, std::size_t in2 = 0) {
    Node n;
    n.kind = kind;
    n.in0 = in0;
    n.in1 = in1;
    n.in2 = in2;
    return n;
  }
  const Node& node(Var v) const;
  Var push(Node n);
  /// Gradient accumulator of a node, or nullptr when nothing upstream is trainable.
  Matrix* grad_target(std::size_t id);
  void backward_node(std::size_t id);

  std::vector<Node> nodes_;
  std::vector<std::size_t> trace_;
};

}  // namespace lasas::numerics
