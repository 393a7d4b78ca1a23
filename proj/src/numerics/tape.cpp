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

#include "lasas/numerics/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lasas/errors.hpp"

namespace lasas::numerics {

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                       b.shape_str());
}

bool row_valid(const FrameMask& mask, std::size_t r) { return mask.empty() || mask[r] != 0; }

void check_mask(const char* op, const FrameMask& mask, std::size_t expected) {
  if (!mask.empty() && mask.size() != expected) {
    throw DimensionError(std::string(op) + ": mask length " + std::to_string(mask.size()) +
                         " does not match " + std::to_string(expected));
  }
}

void add_into(Matrix& dst, const Matrix& src) {
  Real* d = dst.data();
  const Real* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

}  // namespace

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant: return "constant";
    case OpKind::kParam: return "param";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kAddRow: return "add_row";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kRelu: return "relu";
    case OpKind::kSoftmaxRows: return "softmax_rows";
    case OpKind::kLayerNorm: return "layer_norm";
    case OpKind::kRowwiseScaledDot: return "rowwise_scaled_dot";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kStatPool: return "stat_pool";
    case OpKind::kCrossEntropy: return "cross_entropy";
    case OpKind::kSum: return "sum";
  }
  return "unknown";
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= nodes_.size()) throw std::out_of_range("Tape: invalid Var");
  return nodes_[v.id];
}

Var Tape::push(Node n) {
  switch (n.kind) {
    case OpKind::kConstant: n.needs_grad = false; break;
    case OpKind::kParam: n.needs_grad = true; break;
    case OpKind::kConcatCols:
      n.needs_grad = std::any_of(n.inputs.begin(), n.inputs.end(), [this](std::size_t i) { return nodes_[i].needs_grad; });
      break;
    default: {
      // Unused input slots default to 0; only consult the slots each op fills.
      const bool binary = n.kind == OpKind::kMatMul || n.kind == OpKind::kAdd || n.kind == OpKind::kAddRow ||
                          n.kind == OpKind::kMul || n.kind == OpKind::kRowwiseScaledDot;
      n.needs_grad = nodes_[n.in0].needs_grad || (binary && nodes_[n.in1].needs_grad) ||
                     (n.kind == OpKind::kLayerNorm && (nodes_[n.in1].needs_grad || nodes_[n.in2].needs_grad));
    }
  }
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

const Matrix& Tape::value(Var v) const { return node(v).value; }

const Matrix& Tape::grad(Var v) const {
  const Node& n = node(v);
  if (n.grad.empty() && !n.value.empty()) {
    // Materialize zeros lazily so callers always get the value's shape.
    auto& self = const_cast<Node&>(n);
    self.grad = Matrix(n.value.rows(), n.value.cols());
  }
  return n.grad;
}

Real Tape::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.rows() != 1 || m.cols() != 1) throw DimensionError("scalar: value is " + m.shape_str());
  return m(0, 0);
}

OpKind Tape::kind(Var v) const { return node(v).kind; }

Var Tape::constant(Matrix value) {
  Node n = make_node(OpKind::kConstant);
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::param(Param& p) {
  Node n = make_node(OpKind::kParam);
  n.value = p.value;
  n.param = &p;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows()) shape_error("matmul", av, bv);
  Node n = make_node(OpKind::kMatMul, a.id, b.id);
  n.value = numerics::matmul(av, bv);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) shape_error("add", av, bv);
  Node n = make_node(OpKind::kAdd, a.id, b.id);
  n.value = av;
  add_into(n.value, bv);
  return push(std::move(n));
}

Var Tape::add_row(Var a, Var row) {
  const Matrix& av = value(a);
  const Matrix& rv = value(row);
  if (rv.rows() != 1 || rv.cols() != av.cols()) shape_error("add_row", av, rv);
  Node n = make_node(OpKind::kAddRow, a.id, row.id);
  n.value = av;
  for (std::size_t t = 0; t < av.rows(); ++t) {
    auto out = n.value.row(t);
    for (std::size_t j = 0; j < av.cols(); ++j) out[j] += rv(0, j);
  }
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) shape_error("mul", av, bv);
  Node n = make_node(OpKind::kMul, a.id, b.id);
  n.value = av;
  for (std::size_t i = 0; i < av.size(); ++i) n.value.data()[i] *= bv.data()[i];
  return push(std::move(n));
}

Var Tape::scale(Var a, Real s) {
  Node n = make_node(OpKind::kScale, a.id);
  n.value = value(a);
  for (Real& v : n.value.values()) v *= s;
  n.scalar = s;
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  Node n = make_node(OpKind::kRelu, a.id);
  n.value = value(a);
  for (Real& v : n.value.values()) v = v > 0.0 ? v : 0.0;
  return push(std::move(n));
}

Var Tape::softmax_rows(Var a, const FrameMask& key_mask) {
  const Matrix& av = value(a);
  check_mask("softmax_rows", key_mask, av.cols());
  if (!key_mask.empty() && std::none_of(key_mask.begin(), key_mask.end(), [](auto m) { return m; })) {
    throw DimensionError("softmax_rows: every column is masked");
  }
  Node n = make_node(OpKind::kSoftmaxRows, a.id);
  n.value = Matrix(av.rows(), av.cols());
  n.mask = key_mask;
  for (std::size_t t = 0; t < av.rows(); ++t) {
    auto in = av.row(t);
    auto out = n.value.row(t);
    Real peak = -INFINITY;
    for (std::size_t j = 0; j < in.size(); ++j)
      if (row_valid(key_mask, j)) peak = std::max(peak, in[j]);
    Real total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      out[j] = row_valid(key_mask, j) ? std::exp(in[j] - peak) : 0.0;
      total += out[j];
    }
    for (Real& v : out) v /= total;
  }
  return push(std::move(n));
}

Var Tape::layer_norm(Var a, Var gain, Var bias) {
  const Matrix& av = value(a);
  const Matrix& g = value(gain);
  const Matrix& b = value(bias);
  if (g.rows() != 1 || g.cols() != av.cols()) shape_error("layer_norm gain", av, g);
  if (b.rows() != 1 || b.cols() != av.cols()) shape_error("layer_norm bias", av, b);
  Node n = make_node(OpKind::kLayerNorm, a.id, gain.id, bias.id);
  const std::size_t width = av.cols();
  n.value = Matrix(av.rows(), width);
  n.cache = Matrix(av.rows(), width);
  n.cache2 = Matrix(av.rows(), 1);
  for (std::size_t t = 0; t < av.rows(); ++t) {
    auto in = av.row(t);
    Real mean = 0.0;
    for (Real v : in) mean += v;
    mean /= static_cast<Real>(width);
    Real var = 0.0;
    for (Real v : in) var += (v - mean) * (v - mean);
    var /= static_cast<Real>(width);
    const Real inv = 1.0 / std::sqrt(var + kLayerNormEps);
    n.cache2(t, 0) = inv;
    for (std::size_t j = 0; j < width; ++j) {
      const Real xhat = (in[j] - mean) * inv;
      n.cache(t, j) = xhat;
      n.value(t, j) = xhat * g(0, j) + b(0, j);
    }
  }
  return push(std::move(n));
}

Var Tape::rowwise_scaled_dot(Var a, Var b, Real d_k) {
  if (!(d_k > 0.0)) throw ConfigError("rowwise_scaled_dot: d_k must be positive");
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) shape_error("rowwise_scaled_dot", av, bv);
  Node n = make_node(OpKind::kRowwiseScaledDot, a.id, b.id);
  n.scalar = 1.0 / std::sqrt(d_k);
  n.value = Matrix(av.rows(), 1);
  for (std::size_t t = 0; t < av.rows(); ++t) {
    auto x = av.row(t);
    auto y = bv.row(t);
    Real dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += x[j] * y[j];
    n.value(t, 0) = dot / std::sqrt(d_k);
  }
  return push(std::move(n));
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: empty part list");
  const std::size_t rows = value(parts.front()).rows();
  std::size_t width = 0;
  for (Var p : parts) {
    const Matrix& pv = value(p);
    if (pv.rows() != rows) shape_error("concat_cols", value(parts.front()), pv);
    width += pv.cols();
  }
  Node n = make_node(OpKind::kConcatCols);
  n.value = Matrix(rows, width);
  std::size_t offset = 0;
  for (Var p : parts) {
    const Matrix& pv = value(p);
    for (std::size_t t = 0; t < rows; ++t)
      std::copy(pv.row(t).begin(), pv.row(t).end(), n.value.row(t).begin() + offset);
    offset += pv.cols();
    n.inputs.push_back(p.id);
  }
  return push(std::move(n));
}

Var Tape::slice_cols(Var a, std::size_t begin, std::size_t width) {
  const Matrix& av = value(a);
  if (begin + width > av.cols()) {
    throw DimensionError("slice_cols: columns [" + std::to_string(begin) + ", " +
                         std::to_string(begin + width) + ") out of range for " + av.shape_str());
  }
  Node n = make_node(OpKind::kSliceCols, a.id);
  n.index = begin;
  n.value = Matrix(av.rows(), width);
  for (std::size_t t = 0; t < av.rows(); ++t) {
    auto in = av.row(t);
    std::copy(in.begin() + begin, in.begin() + begin + width, n.value.row(t).begin());
  }
  return push(std::move(n));
}

Var Tape::transpose(Var a) {
  Node n = make_node(OpKind::kTranspose, a.id);
  n.value = numerics::transpose(value(a));
  return push(std::move(n));
}

Var Tape::stat_pool(Var a, const FrameMask& mask) {
  const Matrix& av = value(a);
  check_mask("stat_pool", mask, av.rows());
  std::size_t count = 0;
  for (std::size_t t = 0; t < av.rows(); ++t) count += row_valid(mask, t) ? 1 : 0;
  if (count == 0) throw DimensionError("stat_pool: no valid frames");
  const std::size_t d = av.cols();
  Node n = make_node(OpKind::kStatPool, a.id);
  n.mask = mask;
  n.value = Matrix(1, 2 * d);
  n.cache2 = Matrix(1, d);
  const Real inv_count = 1.0 / static_cast<Real>(count);
  for (std::size_t j = 0; j < d; ++j) {
    Real mean = 0.0;
    for (std::size_t t = 0; t < av.rows(); ++t)
      if (row_valid(mask, t)) mean += av(t, j);
    mean *= inv_count;
    Real var = 0.0;
    for (std::size_t t = 0; t < av.rows(); ++t)
      if (row_valid(mask, t)) var += (av(t, j) - mean) * (av(t, j) - mean);
    var *= inv_count;
    const Real stddev = std::sqrt(var + kStatPoolEps);
    n.value(0, j) = mean;
    n.value(0, d + j) = stddev;
    n.cache2(0, j) = stddev;
  }
  n.index = count;
  return push(std::move(n));
}

Var Tape::cross_entropy(Var logits, std::size_t label) {
  const Matrix& lv = value(logits);
  if (lv.rows() != 1) throw DimensionError("cross_entropy: logits must be 1xK, got " + lv.shape_str());
  if (label >= lv.cols()) {
    throw DimensionError("cross_entropy: label " + std::to_string(label) + " out of range for " +
                         std::to_string(lv.cols()) + " classes");
  }
  Node n = make_node(OpKind::kCrossEntropy, logits.id);
  n.index = label;
  Real peak = -INFINITY;
  for (Real v : lv.values()) peak = std::max(peak, v);
  Real total = 0.0;
  n.cache = Matrix(1, lv.cols());
  for (std::size_t k = 0; k < lv.cols(); ++k) {
    n.cache(0, k) = std::exp(lv(0, k) - peak);
    total += n.cache(0, k);
  }
  for (Real& p : n.cache.values()) p /= total;
  n.value = Matrix(1, 1, std::log(total) + peak - lv(0, label));
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n = make_node(OpKind::kSum, a.id);
  Real total = 0.0;
  for (Real v : value(a).values()) total += v;
  n.value = Matrix(1, 1, total);
  return push(std::move(n));
}

Matrix* Tape::grad_target(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return nullptr;
  if (n.grad.empty() && !n.value.empty()) n.grad = Matrix(n.value.rows(), n.value.cols());
  return &n.grad;
}

void Tape::backward() {
  if (nodes_.empty()) return;
  backward(Var{nodes_.size() - 1});
}

void Tape::backward(Var root, Real seed) {
  const Matrix& rv = value(root);
  if (rv.rows() != 1 || rv.cols() != 1) throw DimensionError("backward: root is " + rv.shape_str());
  for (Node& n : nodes_) n.grad = Matrix();
  trace_.clear();
  if (Matrix* g = grad_target(root.id)) (*g)(0, 0) = seed;
  for (std::size_t id = root.id + 1; id-- > 0;) {
    trace_.push_back(id);
    if (!nodes_[id].grad.empty()) backward_node(id);
  }
}

void Tape::backward_node(std::size_t id) {
  // grad_target only writes to earlier nodes; nodes_ never reallocates here.
  Node& n = nodes_[id];
  const Matrix& g = n.grad;
  switch (n.kind) {
    case OpKind::kConstant:
      break;
    case OpKind::kParam:
      add_into(n.param->grad, g);
      break;
    case OpKind::kMatMul: {
      if (Matrix* ga = grad_target(n.in0)) matmul_nt_acc(g, nodes_[n.in1].value, *ga);
      if (Matrix* gb = grad_target(n.in1)) matmul_tn_acc(nodes_[n.in0].value, g, *gb);
      break;
    }
    case OpKind::kAdd:
      if (Matrix* ga = grad_target(n.in0)) add_into(*ga, g);
      if (Matrix* gb = grad_target(n.in1)) add_into(*gb, g);
      break;
    case OpKind::kAddRow: {
      if (Matrix* ga = grad_target(n.in0)) add_into(*ga, g);
      if (Matrix* gr = grad_target(n.in1)) {
        for (std::size_t t = 0; t < g.rows(); ++t)
          for (std::size_t j = 0; j < g.cols(); ++j) (*gr)(0, j) += g(t, j);
      }
      break;
    }
    case OpKind::kMul: {
      const Matrix& a = nodes_[n.in0].value;
      const Matrix& b = nodes_[n.in1].value;
      if (Matrix* ga = grad_target(n.in0))
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += g.data()[i] * b.data()[i];
      if (Matrix* gb = grad_target(n.in1))
        for (std::size_t i = 0; i < g.size(); ++i) gb->data()[i] += g.data()[i] * a.data()[i];
      break;
    }
    case OpKind::kScale: {
      if (Matrix* ga = grad_target(n.in0))
        for (std::size_t i = 0; i < g.size(); ++i) ga->data()[i] += n.scalar * g.data()[i];
      break;
    }
    case OpKind::kRelu: {
      if (Matrix* ga = grad_target(n.in0))
        for (std::size_t i = 0; i < g.size(); ++i)
          if (n.value.data()[i] > 0.0) ga->data()[i] += g.data()[i];
      break;
    }
    case OpKind::kSoftmaxRows: {
      Matrix* ga = grad_target(n.in0);
      if (!ga) break;
      for (std::size_t t = 0; t < g.rows(); ++t) {
        auto y = n.value.row(t);
        auto gy = g.row(t);
        Real dot = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) dot += gy[j] * y[j];
        auto out = ga->row(t);
        for (std::size_t j = 0; j < y.size(); ++j) out[j] += y[j] * (gy[j] - dot);
      }
      break;
    }
    case OpKind::kLayerNorm: {
      const Matrix& gain = nodes_[n.in1].value;
      const std::size_t width = g.cols();
      if (Matrix* ggain = grad_target(n.in1)) {
        for (std::size_t t = 0; t < g.rows(); ++t)
          for (std::size_t j = 0; j < width; ++j) (*ggain)(0, j) += g(t, j) * n.cache(t, j);
      }
      if (Matrix* gbias = grad_target(n.in2)) {
        for (std::size_t t = 0; t < g.rows(); ++t)
          for (std::size_t j = 0; j < width; ++j) (*gbias)(0, j) += g(t, j);
      }
      Matrix* ga = grad_target(n.in0);
      if (!ga) break;
      std::vector<Real> dxhat(width);
      const Real w = static_cast<Real>(width);
      for (std::size_t t = 0; t < g.rows(); ++t) {
        Real sum_d = 0.0;
        Real sum_dx = 0.0;
        for (std::size_t j = 0; j < width; ++j) {
          dxhat[j] = g(t, j) * gain(0, j);
          sum_d += dxhat[j];
          sum_dx += dxhat[j] * n.cache(t, j);
        }
        const Real inv = n.cache2(t, 0);
        for (std::size_t j = 0; j < width; ++j) {
          (*ga)(t, j) += inv / w * (w * dxhat[j] - sum_d - n.cache(t, j) * sum_dx);
        }
      }
      break;
    }
    case OpKind::kRowwiseScaledDot: {
      const Matrix& a = nodes_[n.in0].value;
      const Matrix& b = nodes_[n.in1].value;
      Matrix* ga = grad_target(n.in0);
      Matrix* gb = grad_target(n.in1);
      for (std::size_t t = 0; t < a.rows(); ++t) {
        const Real gt = g(t, 0) * n.scalar;
        if (ga)
          for (std::size_t j = 0; j < a.cols(); ++j) (*ga)(t, j) += gt * b(t, j);
        if (gb)
          for (std::size_t j = 0; j < a.cols(); ++j) (*gb)(t, j) += gt * a(t, j);
      }
      break;
    }
    case OpKind::kConcatCols: {
      std::size_t offset = 0;
      for (std::size_t part : n.inputs) {
        const std::size_t width = nodes_[part].value.cols();
        if (Matrix* gp = grad_target(part)) {
          for (std::size_t t = 0; t < gp->rows(); ++t)
            for (std::size_t j = 0; j < width; ++j) (*gp)(t, j) += g(t, offset + j);
        }
        offset += width;
      }
      break;
    }
    case OpKind::kSliceCols: {
      if (Matrix* ga = grad_target(n.in0))
        for (std::size_t t = 0; t < g.rows(); ++t)
          for (std::size_t j = 0; j < g.cols(); ++j) (*ga)(t, n.index + j) += g(t, j);
      break;
    }
    case OpKind::kTranspose: {
      if (Matrix* ga = grad_target(n.in0))
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) (*ga)(j, i) += g(i, j);
      break;
    }
    case OpKind::kStatPool: {
      Matrix* ga = grad_target(n.in0);
      if (!ga) break;
      const Matrix& a = nodes_[n.in0].value;
      const std::size_t d = a.cols();
      const Real inv_count = 1.0 / static_cast<Real>(n.index);
      for (std::size_t j = 0; j < d; ++j) {
        const Real mean = n.value(0, j);
        const Real g_mean = g(0, j) * inv_count;
        const Real g_std = g(0, d + j) * inv_count / n.cache2(0, j);
        for (std::size_t t = 0; t < a.rows(); ++t) {
          if (!row_valid(n.mask, t)) continue;
          (*ga)(t, j) += g_mean + g_std * (a(t, j) - mean);
        }
      }
      break;
    }
    case OpKind::kCrossEntropy: {
      Matrix* ga = grad_target(n.in0);
      if (!ga) break;
      const Real gl = g(0, 0);
      for (std::size_t k = 0; k < ga->cols(); ++k) {
        (*ga)(0, k) += gl * (n.cache(0, k) - (k == n.index ? 1.0 : 0.0));
      }
      break;
    }
    case OpKind::kSum: {
      if (Matrix* ga = grad_target(n.in0))
        for (Real& v : ga->values()) v += g(0, 0);
      break;
    }
  }
}

}  // namespace lasas::numerics
