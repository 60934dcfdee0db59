#pragma once

// Reverse-mode automatic differentiation over dense Eigen matrices.
//
// A Tape records one forward computation (define-by-run) and is discarded
// after the corresponding backward pass. Nodes are stored in creation order,
// which is a topological order by construction; backward visits each node
// exactly once in reverse. Trainable leaves are registered through
// Tape::parameter() and their gradients are read back in registration order.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gcgrnn/errors.hpp"
#include "gcgrnn/types.hpp"

namespace gcgrnn {

template <typename Scalar>
class Tape;

/// Cheap handle to a value recorded on a tape.
template <typename Scalar>
struct Var {
  Tape<Scalar>* tape = nullptr;
  std::int32_t id = -1;

  [[nodiscard]] bool valid() const { return tape != nullptr && id >= 0; }
};

enum class OpKind : std::uint8_t {
  kLeaf,
  kMatMul,
  kConcatCols,
  kHadamard,
  kSigmoid,
  kTanh,
  kGateBlend,
  kAddBias,
  kAdd,
  kAffine,
  kSymmetrize,
  kSum,
  kMaeLoss,
};

template <typename Scalar>
class Tape {
 public:
  using M = DenseMatrix<Scalar>;
  using V = Var<Scalar>;

  struct Node {
    OpKind kind = OpKind::kLeaf;
    std::array<std::int32_t, 3> in{-1, -1, -1};
    M value;
    M grad;               // allocated during backward
    Scalar a{}, b{};      // coefficients for kAffine
    M aux0, aux1;         // target and mask for kMaeLoss
    bool trainable = false;
  };

  /// Non-trainable leaf.
  V constant(M value) { return push(OpKind::kLeaf, {-1, -1, -1}, std::move(value)); }

  /// Trainable leaf; gradients are later read back in registration order.
  V parameter(const M& value) {
    V v = push(OpKind::kLeaf, {-1, -1, -1}, value);
    nodes_[v.id].trainable = true;
    param_ids_.push_back(v.id);
    return v;
  }

  const M& value(V v) const { return node(v).value; }

  /// Gradient of the last backward() loss w.r.t. an arbitrary node.
  const M& grad(V v) const {
    const Node& n = node(v);
    if (n.grad.size() == 0) {
      throw ContractError("tape: gradient requested before backward()");
    }
    return n.grad;
  }

  std::size_t size() const { return nodes_.size(); }
  std::size_t parameter_count() const { return param_ids_.size(); }

  /// Reverse pass from a scalar loss node. Gradients of nodes that do not
  /// reach the loss stay zero.
  void backward(V loss) {
    const Node& l = node(loss);
    if (l.value.size() != 1) {
      throw ContractError("tape: backward() requires a scalar loss, got " +
                          shape_str(l.value.rows(), l.value.cols()));
    }
    for (std::int32_t i = 0; i <= loss.id; ++i) {
      nodes_[i].grad = M::Zero(nodes_[i].value.rows(), nodes_[i].value.cols());
    }
    nodes_[loss.id].grad(0, 0) = Scalar(1);
    for (std::int32_t i = loss.id; i >= 0; --i) {
      propagate(nodes_[i]);
    }
    ran_backward_ = true;
  }

  /// Per-parameter gradients in registration order; zero matrices for
  /// parameters that never reached the loss.
  std::vector<M> parameter_gradients() const {
    if (!ran_backward_) {
      throw ContractError("tape: parameter_gradients() before backward()");
    }
    std::vector<M> out;
    out.reserve(param_ids_.size());
    for (std::int32_t id : param_ids_) {
      const Node& n = nodes_[id];
      out.push_back(n.grad.size() != 0 ? n.grad : M::Zero(n.value.rows(), n.value.cols()));
    }
    return out;
  }

  // Low-level node emission; the free functions below are the public surface.
  V push(OpKind kind, std::array<std::int32_t, 3> in, M value) {
    Node n;
    n.kind = kind;
    n.in = in;
    n.value = std::move(value);
    nodes_.push_back(std::move(n));
    return V{this, static_cast<std::int32_t>(nodes_.size() - 1)};
  }

  Node& node(V v) {
    check(v);
    return nodes_[v.id];
  }
  const Node& node(V v) const {
    check(v);
    return nodes_[v.id];
  }

 private:
  void check(V v) const {
    if (v.tape != this || v.id < 0 || v.id >= static_cast<std::int32_t>(nodes_.size())) {
      throw ContractError("tape: variable does not belong to this tape");
    }
  }

  M& grad_of(std::int32_t id) { return nodes_[id].grad; }

  void propagate(Node& n) {
    const M& g = n.grad;
    switch (n.kind) {
      case OpKind::kLeaf:
        break;
      case OpKind::kMatMul: {
        const M& a = nodes_[n.in[0]].value;
        const M& b = nodes_[n.in[1]].value;
        grad_of(n.in[0]).noalias() += g * b.transpose();
        grad_of(n.in[1]).noalias() += a.transpose() * g;
        break;
      }
      case OpKind::kConcatCols: {
        const auto p = nodes_[n.in[0]].value.cols();
        const auto q = nodes_[n.in[1]].value.cols();
        grad_of(n.in[0]) += g.leftCols(p);
        grad_of(n.in[1]) += g.rightCols(q);
        break;
      }
      case OpKind::kHadamard: {
        grad_of(n.in[0]).array() += g.array() * nodes_[n.in[1]].value.array();
        grad_of(n.in[1]).array() += g.array() * nodes_[n.in[0]].value.array();
        break;
      }
      case OpKind::kSigmoid: {
        const auto& s = n.value.array();
        grad_of(n.in[0]).array() += g.array() * s * (Scalar(1) - s);
        break;
      }
      case OpKind::kTanh: {
        const auto& t = n.value.array();
        grad_of(n.in[0]).array() += g.array() * (Scalar(1) - t.square());
        break;
      }
      case OpKind::kGateBlend: {
        // h = (1 - z) .* a + z .* b
        const auto& z = nodes_[n.in[0]].value.array();
        const auto& a = nodes_[n.in[1]].value.array();
        const auto& b = nodes_[n.in[2]].value.array();
        grad_of(n.in[0]).array() += g.array() * (b - a);
        grad_of(n.in[1]).array() += g.array() * (Scalar(1) - z);
        grad_of(n.in[2]).array() += g.array() * z;
        break;
      }
      case OpKind::kAddBias: {
        grad_of(n.in[0]) += g;
        grad_of(n.in[1]) += g.colwise().sum();
        break;
      }
      case OpKind::kAdd: {
        grad_of(n.in[0]) += g;
        grad_of(n.in[1]) += g;
        break;
      }
      case OpKind::kAffine: {
        grad_of(n.in[0]) += n.a * g;
        break;
      }
      case OpKind::kSymmetrize: {
        grad_of(n.in[0]) += Scalar(0.5) * (g + g.transpose());
        break;
      }
      case OpKind::kSum: {
        grad_of(n.in[0]).array() += g(0, 0);
        break;
      }
      case OpKind::kMaeLoss: {
        // d/dpred of sum(mask .* |pred - target|) / sum(mask); sign(0) = 0.
        const M& pred = nodes_[n.in[0]].value;
        const Scalar denom = n.aux1.sum();
        grad_of(n.in[0]).array() +=
            g(0, 0) * (pred - n.aux0).array().sign() * n.aux1.array() / denom;
        break;
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<std::int32_t> param_ids_;
  bool ran_backward_ = false;
};

namespace detail {

template <typename Scalar>
void require_same_tape(Var<Scalar> a, Var<Scalar> b, const char* op) {
  if (a.tape != b.tape || a.tape == nullptr) {
    throw ContractError(std::string(op) + ": operands recorded on different tapes");
  }
}

}  // namespace detail

template <typename Scalar>
Var<Scalar> matmul(Var<Scalar> a, Var<Scalar> b) {
  detail::require_same_tape(a, b, "matmul");
  const auto& va = a.tape->value(a);
  const auto& vb = b.tape->value(b);
  if (va.cols() != vb.rows()) {
    throw ShapeError("matmul: " + shape_str(va.rows(), va.cols()) + " incompatible with " +
                     shape_str(vb.rows(), vb.cols()));
  }
  return a.tape->push(OpKind::kMatMul, {a.id, b.id, -1}, va * vb);
}

template <typename Scalar>
Var<Scalar> concat_cols(Var<Scalar> a, Var<Scalar> b) {
  detail::require_same_tape(a, b, "concat_cols");
  const auto& va = a.tape->value(a);
  const auto& vb = b.tape->value(b);
  if (va.rows() != vb.rows() || va.cols() == 0 || vb.cols() == 0) {
    throw ShapeError("concat_cols: cannot join " + shape_str(va.rows(), va.cols()) + " with " +
                     shape_str(vb.rows(), vb.cols()));
  }
  DenseMatrix<Scalar> out(va.rows(), va.cols() + vb.cols());
  out << va, vb;
  return a.tape->push(OpKind::kConcatCols, {a.id, b.id, -1}, std::move(out));
}

template <typename Scalar>
Var<Scalar> hadamard(Var<Scalar> a, Var<Scalar> b) {
  detail::require_same_tape(a, b, "hadamard");
  const auto& va = a.tape->value(a);
  const auto& vb = b.tape->value(b);
  if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
    throw ShapeError("hadamard: " + shape_str(va.rows(), va.cols()) + " vs " +
                     shape_str(vb.rows(), vb.cols()));
  }
  return a.tape->push(OpKind::kHadamard, {a.id, b.id, -1}, va.cwiseProduct(vb));
}

template <typename Scalar>
Var<Scalar> sigmoid(Var<Scalar> a) {
  const auto& v = a.tape->value(a);
  DenseMatrix<Scalar> out =
      (Scalar(1) / (Scalar(1) + (-v.array()).exp())).matrix();
  return a.tape->push(OpKind::kSigmoid, {a.id, -1, -1}, std::move(out));
}

template <typename Scalar>
Var<Scalar> tanh(Var<Scalar> a) {
  const auto& v = a.tape->value(a);
  return a.tape->push(OpKind::kTanh, {a.id, -1, -1}, v.array().tanh().matrix());
}

/// (1 - z) .* a + z .* b, the gated blend of two states.
template <typename Scalar>
Var<Scalar> gate_blend(Var<Scalar> z, Var<Scalar> a, Var<Scalar> b) {
  detail::require_same_tape(z, a, "gate_blend");
  detail::require_same_tape(z, b, "gate_blend");
  const auto& vz = z.tape->value(z);
  const auto& va = a.tape->value(a);
  const auto& vb = b.tape->value(b);
  if (vz.rows() != va.rows() || vz.cols() != va.cols() || vz.rows() != vb.rows() ||
      vz.cols() != vb.cols()) {
    throw ShapeError("gate_blend: mismatched shapes " + shape_str(vz.rows(), vz.cols()) + ", " +
                     shape_str(va.rows(), va.cols()) + ", " + shape_str(vb.rows(), vb.cols()));
  }
  DenseMatrix<Scalar> out =
      ((Scalar(1) - vz.array()) * va.array() + vz.array() * vb.array()).matrix();
  return z.tape->push(OpKind::kGateBlend, {z.id, a.id, b.id}, std::move(out));
}

/// Broadcast-add a 1-row bias to every row.
template <typename Scalar>
Var<Scalar> add_bias(Var<Scalar> a, Var<Scalar> bias) {
  detail::require_same_tape(a, bias, "add_bias");
  const auto& va = a.tape->value(a);
  const auto& vb = bias.tape->value(bias);
  if (vb.rows() != 1 || vb.cols() != va.cols()) {
    throw ShapeError("add_bias: bias " + shape_str(vb.rows(), vb.cols()) +
                     " does not broadcast over " + shape_str(va.rows(), va.cols()));
  }
  DenseMatrix<Scalar> out = va.rowwise() + vb.row(0);
  return a.tape->push(OpKind::kAddBias, {a.id, bias.id, -1}, std::move(out));
}

template <typename Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b) {
  detail::require_same_tape(a, b, "add");
  const auto& va = a.tape->value(a);
  const auto& vb = b.tape->value(b);
  if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
    throw ShapeError("add: " + shape_str(va.rows(), va.cols()) + " vs " +
                     shape_str(vb.rows(), vb.cols()));
  }
  return a.tape->push(OpKind::kAdd, {a.id, b.id, -1}, va + vb);
}

/// Elementwise a*x + b.
template <typename Scalar>
Var<Scalar> affine(Var<Scalar> x, Scalar a, Scalar b) {
  const auto& v = x.tape->value(x);
  Var<Scalar> out = x.tape->push(OpKind::kAffine, {x.id, -1, -1},
                                 (a * v.array() + b).matrix());
  out.tape->node(out).a = a;
  out.tape->node(out).b = b;
  return out;
}

template <typename Scalar>
Var<Scalar> scale(Var<Scalar> x, Scalar a) {
  return affine(x, a, Scalar(0));
}

/// (x + x^T) / 2; gradients stay symmetric under any downstream use.
template <typename Scalar>
Var<Scalar> symmetrize(Var<Scalar> x) {
  const auto& v = x.tape->value(x);
  if (v.rows() != v.cols()) {
    throw ShapeError("symmetrize: matrix must be square, got " +
                     shape_str(v.rows(), v.cols()));
  }
  DenseMatrix<Scalar> out = Scalar(0.5) * (v + v.transpose());
  return x.tape->push(OpKind::kSymmetrize, {x.id, -1, -1}, std::move(out));
}

template <typename Scalar>
Var<Scalar> sum(Var<Scalar> x) {
  const auto& v = x.tape->value(x);
  DenseMatrix<Scalar> out(1, 1);
  out(0, 0) = v.sum();
  return x.tape->push(OpKind::kSum, {x.id, -1, -1}, std::move(out));
}

/// Masked mean absolute error: sum(mask .* |pred - target|) / sum(mask).
/// Entries with mask 0 contribute nothing; the denominator counts only
/// included entries. target and mask are constants of the op.
template <typename Scalar>
Var<Scalar> mae_loss(Var<Scalar> pred, const DenseMatrix<Scalar>& target,
                     const DenseMatrix<Scalar>& mask) {
  const auto& vp = pred.tape->value(pred);
  if (vp.rows() != target.rows() || vp.cols() != target.cols() || vp.rows() != mask.rows() ||
      vp.cols() != mask.cols()) {
    throw ShapeError("mae_loss: pred " + shape_str(vp.rows(), vp.cols()) + ", target " +
                     shape_str(target.rows(), target.cols()) + ", mask " +
                     shape_str(mask.rows(), mask.cols()));
  }
  if (!((mask.array() == Scalar(0)) || (mask.array() == Scalar(1))).all()) {
    throw ValueError("mae_loss: mask entries must be 0 or 1");
  }
  const Scalar denom = mask.sum();
  if (denom == Scalar(0)) {
    throw ValueError("mae_loss: mask excludes every entry");
  }
  DenseMatrix<Scalar> out(1, 1);
  out(0, 0) = (mask.array() * (vp - target).array().abs()).sum() / denom;
  Var<Scalar> v = pred.tape->push(OpKind::kMaeLoss, {pred.id, -1, -1}, std::move(out));
  auto& node = v.tape->node(v);
  node.aux0 = target;
  node.aux1 = mask;
  return v;
}

using Taped = Tape<double>;
using Vard = Var<double>;

}  // namespace gcgrnn
