#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labelgcn/matrix.hpp"

namespace labelgcn {

/// Named trainable tensors in declaration order. The order is part of the
/// checkpoint format and of every Gradients vector.
class ParameterSet {
 public:
  std::size_t add(std::string name, Matrix value);

  std::size_t size() const { return values_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const Matrix& operator[](std::size_t i) const { return values_.at(i); }
  Matrix& operator[](std::size_t i) { return values_.at(i); }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find, but throws ArgumentError when absent.
  std::size_t index_of(std::string_view name) const;

  std::vector<Matrix> zeros_like() const;
  std::size_t scalar_count() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Matrix> values_;
};

using Gradients = std::vector<Matrix>;

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

/// Reverse-mode gradient tape over dense matrices.
///
/// Each op evaluates eagerly and appends a node; `backward` walks the nodes
/// in reverse and accumulates into the gradients of the parameters the loss
/// depends on. Nodes that do not depend on any parameter are never visited
/// during the backward pass. Every op output is checked for NaN/Inf.
class Tape {
 public:
  Tape() = default;
  explicit Tape(const ParameterSet& params) : params_(&params) {}

  Var constant(Matrix value);
  /// Leaf reading parameter `index`; repeated calls return the same node.
  Var param(std::size_t index);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  /// a (m×n) + row (1×n) broadcast over rows.
  Var add_row(Var a, Var row);
  Var tanh(Var a);
  Var concat_cols(Var a, Var b);
  /// row (1×n) stacked `count` times.
  Var repeat_rows(Var row, std::size_t count);
  /// Per-row dot products of two m×n matrices, as an m×1 column.
  Var row_dot(Var a, Var b);
  Var scale(Var a, double factor);
  Var transpose(Var a);
  /// Mean of the selected rows of `table`, as 1×cols. Repeats count with multiplicity.
  Var gather_mean(Var table, std::span<const std::size_t> rows);
  /// 1×1 softmax negative log-likelihood of `target` over a row or column of scores.
  Var softmax_nll(Var scores, std::size_t target);

  const Matrix& value(Var v) const;
  std::size_t size() const { return nodes_.size(); }

  /// Accumulates d(loss)/d(param) into `grads` (which must be shaped like the
  /// ParameterSet). `loss` must be 1×1.
  void backward(Var loss, Gradients& grads) const;

 private:
  enum class Op {
    kConstant,
    kParam,
    kMatMul,
    kAdd,
    kAddRow,
    kTanh,
    kConcatCols,
    kRepeatRows,
    kRowDot,
    kScale,
    kTranspose,
    kGatherMean,
    kSoftmaxNll,
  };

  struct Node {
    Op op = Op::kConstant;
    std::size_t a = 0;
    std::size_t b = 0;
    Matrix value;
    Matrix aux;  // softmax gradient for kSoftmaxNll
    double scalar = 0.0;
    std::size_t index = 0;  // parameter index or target
    std::vector<std::size_t> rows;
    bool needs_grad = false;
  };

  Var push(Node node, const char* op_name);
  const Node& node(Var v) const;

  const ParameterSet* params_ = nullptr;
  std::vector<Node> nodes_;
  std::vector<std::optional<std::size_t>> param_nodes_;
};

}  // namespace labelgcn
