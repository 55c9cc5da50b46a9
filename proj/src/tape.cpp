#include "labelgcn/tape.hpp"

#include <cmath>
#include <utility>

#include "labelgcn/error.hpp"
#include "labelgcn/loss.hpp"

namespace labelgcn {

std::size_t ParameterSet::add(std::string name, Matrix value) {
  if (find(name)) throw ArgumentError("duplicate parameter name '" + name + "'");
  names_.push_back(std::move(name));
  values_.push_back(std::move(value));
  return values_.size() - 1;
}

std::optional<std::size_t> ParameterSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t ParameterSet::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ArgumentError("no parameter named '" + std::string(name) + "'");
}

std::vector<Matrix> ParameterSet::zeros_like() const {
  std::vector<Matrix> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.emplace_back(v.rows(), v.cols());
  return out;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

namespace {

void accumulate(Matrix& into, Matrix delta) {
  if (into.empty()) {
    into = std::move(delta);
    return;
  }
  auto d = into.data();
  auto s = delta.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

}  // namespace

Var Tape::push(Node node, const char* op_name) {
  if (!node.value.all_finite()) {
    throw NumericError(std::string("non-finite value produced by ") + op_name);
  }
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id >= nodes_.size()) throw IndexError("tape variable out of range");
  return nodes_[v.id];
}

const Matrix& Tape::value(Var v) const {
  const Node& n = node(v);
  if (n.op == Op::kParam) return (*params_)[n.index];
  return n.value;
}

Var Tape::constant(Matrix value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  return push(std::move(n), "constant");
}

Var Tape::param(std::size_t index) {
  if (params_ == nullptr || index >= params_->size()) throw IndexError("tape parameter index out of range");
  if (param_nodes_.size() < params_->size()) param_nodes_.resize(params_->size());
  if (param_nodes_[index]) return Var{*param_nodes_[index]};
  if (!(*params_)[index].all_finite()) throw NumericError("non-finite parameter " + params_->name(index));
  Node n;
  n.op = Op::kParam;
  n.index = index;
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  param_nodes_[index] = nodes_.size() - 1;
  return Var{nodes_.size() - 1};
}

Var Tape::matmul(Var a, Var b) {
  Node n;
  n.op = Op::kMatMul;
  n.a = a.id;
  n.b = b.id;
  n.value = labelgcn::matmul(value(a), value(b));
  n.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(n), "matmul");
}

Var Tape::add(Var a, Var b) {
  Node n;
  n.op = Op::kAdd;
  n.a = a.id;
  n.b = b.id;
  n.value = value(a) + value(b);
  n.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(n), "add");
}

Var Tape::add_row(Var a, Var row) {
  const Matrix& av = value(a);
  const Matrix& rv = value(row);
  if (rv.rows() != 1 || rv.cols() != av.cols()) {
    throw ShapeError("add_row shape mismatch: " + av.shape_string() + " + " + rv.shape_string());
  }
  Node n;
  n.op = Op::kAddRow;
  n.a = a.id;
  n.b = row.id;
  n.value = av;
  for (std::size_t i = 0; i < av.rows(); ++i)
    for (std::size_t j = 0; j < av.cols(); ++j) n.value(i, j) += rv(0, j);
  n.needs_grad = node(a).needs_grad || node(row).needs_grad;
  return push(std::move(n), "add_row");
}

Var Tape::tanh(Var a) {
  Node n;
  n.op = Op::kTanh;
  n.a = a.id;
  n.value = value(a);
  for (double& v : n.value.data()) v = std::tanh(v);
  n.needs_grad = node(a).needs_grad;
  return push(std::move(n), "tanh");
}

Var Tape::concat_cols(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.rows() != bv.rows()) {
    throw ShapeError("concat_cols row mismatch: " + av.shape_string() + " | " + bv.shape_string());
  }
  Node n;
  n.op = Op::kConcatCols;
  n.a = a.id;
  n.b = b.id;
  n.value = Matrix(av.rows(), av.cols() + bv.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    for (std::size_t j = 0; j < av.cols(); ++j) n.value(i, j) = av(i, j);
    for (std::size_t j = 0; j < bv.cols(); ++j) n.value(i, av.cols() + j) = bv(i, j);
  }
  n.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(n), "concat_cols");
}

Var Tape::repeat_rows(Var row, std::size_t count) {
  const Matrix& rv = value(row);
  if (rv.rows() != 1) throw ShapeError("repeat_rows expects a row vector, got " + rv.shape_string());
  Node n;
  n.op = Op::kRepeatRows;
  n.a = row.id;
  n.index = count;
  n.value = Matrix(count, rv.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < rv.cols(); ++j) n.value(i, j) = rv(0, j);
  n.needs_grad = node(row).needs_grad;
  return push(std::move(n), "repeat_rows");
}

Var Tape::row_dot(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (!av.same_shape(bv)) throw ShapeError("row_dot shape mismatch: " + av.shape_string() + " . " + bv.shape_string());
  Node n;
  n.op = Op::kRowDot;
  n.a = a.id;
  n.b = b.id;
  n.value = Matrix(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < av.cols(); ++j) s += av(i, j) * bv(i, j);
    n.value(i, 0) = s;
  }
  n.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(n), "row_dot");
}

Var Tape::scale(Var a, double factor) {
  Node n;
  n.op = Op::kScale;
  n.a = a.id;
  n.scalar = factor;
  n.value = factor * value(a);
  n.needs_grad = node(a).needs_grad;
  return push(std::move(n), "scale");
}

Var Tape::transpose(Var a) {
  Node n;
  n.op = Op::kTranspose;
  n.a = a.id;
  n.value = labelgcn::transpose(value(a));
  n.needs_grad = node(a).needs_grad;
  return push(std::move(n), "transpose");
}

Var Tape::gather_mean(Var table, std::span<const std::size_t> rows) {
  const Matrix& tv = value(table);
  if (rows.empty()) throw ArgumentError("gather_mean over an empty row set");
  Node n;
  n.op = Op::kGatherMean;
  n.a = table.id;
  n.rows.assign(rows.begin(), rows.end());
  n.value = Matrix(1, tv.cols());
  for (std::size_t r : rows) {
    if (r >= tv.rows()) {
      throw IndexError("gather_mean row " + std::to_string(r) + " out of range for " + tv.shape_string());
    }
    for (std::size_t j = 0; j < tv.cols(); ++j) n.value(0, j) += tv(r, j);
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& v : n.value.data()) v *= inv;
  n.needs_grad = node(table).needs_grad;
  return push(std::move(n), "gather_mean");
}

Var Tape::softmax_nll(Var scores, std::size_t target) {
  const Matrix& sv = value(scores);
  if (sv.rows() != 1 && sv.cols() != 1) throw ShapeError("softmax_nll expects a vector, got " + sv.shape_string());
  auto result = labelgcn::softmax_nll(sv.data(), target);
  Node n;
  n.op = Op::kSoftmaxNll;
  n.a = scores.id;
  n.index = target;
  n.value = Matrix(1, 1, result.loss);
  n.aux = Matrix(sv.rows(), sv.cols(), std::move(result.grad));
  n.needs_grad = node(scores).needs_grad;
  return push(std::move(n), "softmax_nll");
}

void Tape::backward(Var loss, Gradients& grads) const {
  const Matrix& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) throw ShapeError("backward needs a 1x1 loss, got " + lv.shape_string());
  if (params_ != nullptr && grads.size() != params_->size()) {
    throw ShapeError("gradient list has " + std::to_string(grads.size()) + " entries, expected " +
                     std::to_string(params_->size()));
  }

  std::vector<Matrix> adj(loss.id + 1);
  adj[loss.id] = Matrix(1, 1, 1.0);

  for (std::size_t k = loss.id + 1; k-- > 0;) {
    const Node& n = nodes_[k];
    if (!n.needs_grad || adj[k].empty()) continue;
    Matrix& g = adj[k];
    auto wants = [&](std::size_t id) { return nodes_[id].needs_grad; };

    switch (n.op) {
      case Op::kConstant:
        break;
      case Op::kParam: {
        Matrix& target = grads[n.index];
        if (!target.same_shape(g)) throw ShapeError("gradient shape mismatch for " + params_->name(n.index));
        accumulate(target, std::move(g));
        break;
      }
      case Op::kMatMul: {
        if (wants(n.a)) accumulate(adj[n.a], labelgcn::matmul(g, labelgcn::transpose(value(Var{n.b}))));
        if (wants(n.b)) accumulate(adj[n.b], labelgcn::matmul(labelgcn::transpose(value(Var{n.a})), g));
        break;
      }
      case Op::kAdd: {
        if (wants(n.a)) accumulate(adj[n.a], g);
        if (wants(n.b)) accumulate(adj[n.b], g);
        break;
      }
      case Op::kAddRow: {
        if (wants(n.b)) {
          Matrix row(1, g.cols());
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) row(0, j) += g(i, j);
          accumulate(adj[n.b], std::move(row));
        }
        if (wants(n.a)) accumulate(adj[n.a], g);
        break;
      }
      case Op::kTanh: {
        Matrix d = g;
        auto y = n.value.data();
        auto dd = d.data();
        for (std::size_t i = 0; i < dd.size(); ++i) dd[i] *= 1.0 - y[i] * y[i];
        accumulate(adj[n.a], std::move(d));
        break;
      }
      case Op::kConcatCols: {
        const std::size_t left = value(Var{n.a}).cols();
        const std::size_t right = value(Var{n.b}).cols();
        if (wants(n.a)) {
          Matrix d(g.rows(), left);
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < left; ++j) d(i, j) = g(i, j);
          accumulate(adj[n.a], std::move(d));
        }
        if (wants(n.b)) {
          Matrix d(g.rows(), right);
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < right; ++j) d(i, j) = g(i, left + j);
          accumulate(adj[n.b], std::move(d));
        }
        break;
      }
      case Op::kRepeatRows: {
        Matrix row(1, g.cols());
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) row(0, j) += g(i, j);
        accumulate(adj[n.a], std::move(row));
        break;
      }
      case Op::kRowDot: {
        const Matrix& av = value(Var{n.a});
        const Matrix& bv = value(Var{n.b});
        if (wants(n.a)) {
          Matrix d(av.rows(), av.cols());
          for (std::size_t i = 0; i < av.rows(); ++i)
            for (std::size_t j = 0; j < av.cols(); ++j) d(i, j) = g(i, 0) * bv(i, j);
          accumulate(adj[n.a], std::move(d));
        }
        if (wants(n.b)) {
          Matrix d(bv.rows(), bv.cols());
          for (std::size_t i = 0; i < bv.rows(); ++i)
            for (std::size_t j = 0; j < bv.cols(); ++j) d(i, j) = g(i, 0) * av(i, j);
          accumulate(adj[n.b], std::move(d));
        }
        break;
      }
      case Op::kScale:
        accumulate(adj[n.a], n.scalar * g);
        break;
      case Op::kTranspose:
        accumulate(adj[n.a], labelgcn::transpose(g));
        break;
      case Op::kGatherMean: {
        const Matrix& tv = value(Var{n.a});
        Matrix d(tv.rows(), tv.cols());
        const double inv = 1.0 / static_cast<double>(n.rows.size());
        for (std::size_t r : n.rows)
          for (std::size_t j = 0; j < tv.cols(); ++j) d(r, j) += inv * g(0, j);
        accumulate(adj[n.a], std::move(d));
        break;
      }
      case Op::kSoftmaxNll:
        accumulate(adj[n.a], g(0, 0) * n.aux);
        break;
    }
  }
}

}  // namespace labelgcn
