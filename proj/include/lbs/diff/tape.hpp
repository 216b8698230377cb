#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lbs/core/error.hpp"

namespace lbs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A trainable tensor: value, accumulated gradient, Adam slots. Parameters live
// outside any tape and are shared by every graph built over them.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix m;
  Matrix v;

  Param() = default;
  Param(std::string n, Matrix init)
      : name(std::move(n)),
        value(std::move(init)),
        grad(Matrix::Zero(value.rows(), value.cols())),
        m(Matrix::Zero(value.rows(), value.cols())),
        v(Matrix::Zero(value.rows(), value.cols())) {}

  Eigen::Index rows() const { return value.rows(); }
  Eigen::Index cols() const { return value.cols(); }
  void zero_grad() { grad.setZero(); }
};

namespace detail {

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

class Tape;

// Cheap handle to a node on a tape.
struct Var {
  Tape* tape = nullptr;
  std::int32_t id = -1;

  const Matrix& value() const;
  double scalar() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
};

// Dynamic reverse-mode tape over dense matrices. Nodes are evaluated eagerly;
// backward() walks the recorded graph once for a scalar loss and accumulates
// into Param::grad for every parameter leaf.
class Tape {
  enum class Op : std::uint8_t {
    kConst, kParam,
    kAdd, kSub, kMul, kDiv, kNeg,
    kMatMul,
    kExp, kLog, kSoftplus, kRelu, kLeakyRelu, kTanh, kSquare,
    kAddConst, kMulConst,
    kSumAll, kMeanAll, kRowSum,
    kBroadcastRows, kBroadcastCols,
    kConcatCols, kSliceCols,
    kMin, kMax, kClamp,
  };

  struct Node {
    Op op;
    std::int32_t a = -1;
    std::int32_t b = -1;
    double c0 = 0.0;  // op payload: scalar constant, clamp lo, slice start, leaky slope
    double c1 = 0.0;  // op payload: clamp hi, slice width
    Matrix value;
    Param* param = nullptr;
  };

 public:
  Var constant(Matrix v) { return push({Op::kConst, -1, -1, 0, 0, std::move(v), nullptr}); }

  Var constant(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return constant(std::move(m));
  }

  Var parameter(Param& p) { return push({Op::kParam, -1, -1, 0, 0, p.value, &p}); }

  Var add(Var x, Var y) {
    require_same_shape("add", x, y);
    return push({Op::kAdd, x.id, y.id, 0, 0, val(x) + val(y), nullptr});
  }

  Var sub(Var x, Var y) {
    require_same_shape("sub", x, y);
    return push({Op::kSub, x.id, y.id, 0, 0, val(x) - val(y), nullptr});
  }

  Var mul(Var x, Var y) {
    require_same_shape("mul", x, y);
    return push({Op::kMul, x.id, y.id, 0, 0, (val(x).array() * val(y).array()).matrix(), nullptr});
  }

  Var div(Var x, Var y) {
    require_same_shape("div", x, y);
    return push({Op::kDiv, x.id, y.id, 0, 0, (val(x).array() / val(y).array()).matrix(), nullptr});
  }

  Var neg(Var x) { return push({Op::kNeg, x.id, -1, 0, 0, -val(x), nullptr}); }

  Var matmul(Var x, Var y) {
    if (val(x).cols() != val(y).rows())
      throw ShapeError("matmul: inner dimensions differ, " + shape_str(x) + " vs " + shape_str(y));
    return push({Op::kMatMul, x.id, y.id, 0, 0, val(x) * val(y), nullptr});
  }

  Var exp(Var x) { return push({Op::kExp, x.id, -1, 0, 0, val(x).array().exp().matrix(), nullptr}); }

  Var log(Var x) { return push({Op::kLog, x.id, -1, 0, 0, val(x).array().log().matrix(), nullptr}); }

  Var softplus(Var x) {
    return push({Op::kSoftplus, x.id, -1, 0, 0,
                 val(x).unaryExpr([](double v) { return detail::softplus(v); }), nullptr});
  }

  Var relu(Var x) {
    return push({Op::kRelu, x.id, -1, 0, 0, val(x).cwiseMax(0.0), nullptr});
  }

  Var leaky_relu(Var x, double slope = 0.01) {
    return push({Op::kLeakyRelu, x.id, -1, slope, 0,
                 val(x).unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; }), nullptr});
  }

  Var tanh(Var x) { return push({Op::kTanh, x.id, -1, 0, 0, val(x).array().tanh().matrix(), nullptr}); }

  Var square(Var x) { return push({Op::kSquare, x.id, -1, 0, 0, val(x).cwiseProduct(val(x)), nullptr}); }

  Var add_const(Var x, double c) {
    return push({Op::kAddConst, x.id, -1, c, 0, (val(x).array() + c).matrix(), nullptr});
  }

  Var mul_const(Var x, double c) { return push({Op::kMulConst, x.id, -1, c, 0, val(x) * c, nullptr}); }

  // n x d -> 1 x 1
  Var sum_all(Var x) { return push({Op::kSumAll, x.id, -1, 0, 0, scalar_matrix(val(x).sum()), nullptr}); }

  Var mean_all(Var x) {
    if (val(x).size() == 0) throw ShapeError("mean_all: empty matrix");
    return push({Op::kMeanAll, x.id, -1, 0, 0, scalar_matrix(val(x).mean()), nullptr});
  }

  // n x d -> n x 1
  Var row_sum(Var x) {
    return push({Op::kRowSum, x.id, -1, 0, 0, val(x).rowwise().sum(), nullptr});
  }

  // 1 x d -> n x d
  Var broadcast_rows(Var x, Eigen::Index n) {
    if (val(x).rows() != 1) throw ShapeError("broadcast_rows: expected a single row, got " + shape_str(x));
    return push({Op::kBroadcastRows, x.id, -1, 0, 0, val(x).replicate(n, 1), nullptr});
  }

  // n x 1 -> n x d
  Var broadcast_cols(Var x, Eigen::Index d) {
    if (val(x).cols() != 1) throw ShapeError("broadcast_cols: expected a single column, got " + shape_str(x));
    return push({Op::kBroadcastCols, x.id, -1, 0, 0, val(x).replicate(1, d), nullptr});
  }

  Var concat_cols(Var x, Var y) {
    if (val(y).cols() == 0) return x;
    if (val(x).cols() == 0) return y;
    if (val(x).rows() != val(y).rows())
      throw ShapeError("concat_cols: row counts differ, " + shape_str(x) + " vs " + shape_str(y));
    Matrix m(val(x).rows(), val(x).cols() + val(y).cols());
    m << val(x), val(y);
    return push({Op::kConcatCols, x.id, y.id, double(val(x).cols()), 0, std::move(m), nullptr});
  }

  Var slice_cols(Var x, Eigen::Index start, Eigen::Index width) {
    if (start < 0 || width < 0 || start + width > val(x).cols())
      throw ShapeError("slice_cols: range out of bounds for " + shape_str(x));
    return push({Op::kSliceCols, x.id, -1, double(start), double(width),
                 val(x).middleCols(start, width), nullptr});
  }

  Var min(Var x, Var y) {
    require_same_shape("min", x, y);
    return push({Op::kMin, x.id, y.id, 0, 0, val(x).cwiseMin(val(y)), nullptr});
  }

  Var max(Var x, Var y) {
    require_same_shape("max", x, y);
    return push({Op::kMax, x.id, y.id, 0, 0, val(x).cwiseMax(val(y)), nullptr});
  }

  Var clamp(Var x, double lo, double hi) {
    return push({Op::kClamp, x.id, -1, lo, hi, val(x).cwiseMax(lo).cwiseMin(hi), nullptr});
  }

  const Matrix& value(Var x) const { return nodes_[check(x)].value; }

  // Gradient of the last backward() pass w.r.t. an intermediate node.
  const Matrix& gradient(Var x) const {
    if (grads_.empty()) throw ShapeError("gradient: no backward pass recorded");
    return grads_[check(x)];
  }

  // Reverse sweep from a scalar loss. Accumulates into Param::grad.
  void backward(Var loss) {
    const std::size_t root = check(loss);
    if (nodes_[root].value.rows() != 1 || nodes_[root].value.cols() != 1)
      throw ShapeError("backward: loss must be a 1x1 scalar, got " + shape_str(loss));

    grads_.assign(nodes_.size(), Matrix());
    grads_[root] = scalar_matrix(1.0);

    for (std::int32_t i = static_cast<std::int32_t>(root); i >= 0; --i) {
      if (grads_[i].size() == 0) continue;  // not reachable from the loss
      const Node& n = nodes_[i];
      const Matrix& g = grads_[i];
      switch (n.op) {
        case Op::kConst:
          break;
        case Op::kParam:
          n.param->grad += g;
          break;
        case Op::kAdd:
          accum(n.a, g);
          accum(n.b, g);
          break;
        case Op::kSub:
          accum(n.a, g);
          accum(n.b, -g);
          break;
        case Op::kMul:
          accum(n.a, g.cwiseProduct(nodes_[n.b].value));
          accum(n.b, g.cwiseProduct(nodes_[n.a].value));
          break;
        case Op::kDiv: {
          const Matrix& bv = nodes_[n.b].value;
          accum(n.a, (g.array() / bv.array()).matrix());
          accum(n.b, (-g.array() * n.value.array() / bv.array()).matrix());
          break;
        }
        case Op::kNeg:
          accum(n.a, -g);
          break;
        case Op::kMatMul:
          accum(n.a, g * nodes_[n.b].value.transpose());
          accum(n.b, nodes_[n.a].value.transpose() * g);
          break;
        case Op::kExp:
          accum(n.a, g.cwiseProduct(n.value));
          break;
        case Op::kLog:
          accum(n.a, (g.array() / nodes_[n.a].value.array()).matrix());
          break;
        case Op::kSoftplus:
          accum(n.a, g.cwiseProduct(nodes_[n.a].value.unaryExpr(
                         [](double v) { return detail::sigmoid(v); })));
          break;
        case Op::kRelu:
          accum(n.a, g.cwiseProduct(nodes_[n.a].value.unaryExpr(
                         [](double v) { return v > 0.0 ? 1.0 : 0.0; })));
          break;
        case Op::kLeakyRelu: {
          const double slope = n.c0;
          accum(n.a, g.cwiseProduct(nodes_[n.a].value.unaryExpr(
                         [slope](double v) { return v > 0.0 ? 1.0 : slope; })));
          break;
        }
        case Op::kTanh:
          accum(n.a, (g.array() * (1.0 - n.value.array().square())).matrix());
          break;
        case Op::kSquare:
          accum(n.a, 2.0 * g.cwiseProduct(nodes_[n.a].value));
          break;
        case Op::kAddConst:
          accum(n.a, g);
          break;
        case Op::kMulConst:
          accum(n.a, g * n.c0);
          break;
        case Op::kSumAll:
          accum(n.a, Matrix::Constant(nodes_[n.a].value.rows(), nodes_[n.a].value.cols(), g(0, 0)));
          break;
        case Op::kMeanAll:
          accum(n.a, Matrix::Constant(nodes_[n.a].value.rows(), nodes_[n.a].value.cols(),
                                      g(0, 0) / double(nodes_[n.a].value.size())));
          break;
        case Op::kRowSum:
          accum(n.a, g.replicate(1, nodes_[n.a].value.cols()));
          break;
        case Op::kBroadcastRows:
          accum(n.a, g.colwise().sum());
          break;
        case Op::kBroadcastCols:
          accum(n.a, g.rowwise().sum());
          break;
        case Op::kConcatCols: {
          const Eigen::Index split = static_cast<Eigen::Index>(n.c0);
          accum(n.a, g.leftCols(split));
          accum(n.b, g.rightCols(g.cols() - split));
          break;
        }
        case Op::kSliceCols: {
          Matrix ga = Matrix::Zero(nodes_[n.a].value.rows(), nodes_[n.a].value.cols());
          ga.middleCols(static_cast<Eigen::Index>(n.c0), static_cast<Eigen::Index>(n.c1)) = g;
          accum(n.a, ga);
          break;
        }
        case Op::kMin: {
          const Matrix& av = nodes_[n.a].value;
          const Matrix& bv = nodes_[n.b].value;
          accum(n.a, ((av.array() <= bv.array()).cast<double>() * g.array()).matrix());
          accum(n.b, ((av.array() > bv.array()).cast<double>() * g.array()).matrix());
          break;
        }
        case Op::kMax: {
          const Matrix& av = nodes_[n.a].value;
          const Matrix& bv = nodes_[n.b].value;
          accum(n.a, ((av.array() >= bv.array()).cast<double>() * g.array()).matrix());
          accum(n.b, ((av.array() < bv.array()).cast<double>() * g.array()).matrix());
          break;
        }
        case Op::kClamp: {
          const Matrix& av = nodes_[n.a].value;
          accum(n.a, ((av.array() > n.c0 && av.array() < n.c1).cast<double>() * g.array()).matrix());
          break;
        }
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }

  void clear() {
    nodes_.clear();
    grads_.clear();
  }

 private:
  static Matrix scalar_matrix(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
  }

  Var push(Node n) {
    nodes_.push_back(std::move(n));
    return Var{this, static_cast<std::int32_t>(nodes_.size() - 1)};
  }

  std::size_t check(Var x) const {
    if (x.tape != this || x.id < 0 || static_cast<std::size_t>(x.id) >= nodes_.size())
      throw ShapeError("Var does not belong to this tape");
    return static_cast<std::size_t>(x.id);
  }

  const Matrix& val(Var x) const { return nodes_[check(x)].value; }

  std::string shape_str(Var x) const {
    return std::to_string(val(x).rows()) + "x" + std::to_string(val(x).cols());
  }

  void require_same_shape(const char* op, Var x, Var y) const {
    if (val(x).rows() != val(y).rows() || val(x).cols() != val(y).cols())
      throw ShapeError(std::string(op) + ": shape mismatch, " + shape_str(x) + " vs " + shape_str(y));
  }

  template <class Expr>
  void accum(std::int32_t idx, Expr&& g) {
    if (grads_[idx].size() == 0)
      grads_[idx] = std::forward<Expr>(g);
    else
      grads_[idx] += std::forward<Expr>(g);
  }

  std::vector<Node> nodes_;
  std::vector<Matrix> grads_;
};

inline const Matrix& Var::value() const { return tape->value(*this); }

inline double Var::scalar() const {
  const Matrix& m = value();
  if (m.rows() != 1 || m.cols() != 1) throw ShapeError("scalar: node is not 1x1");
  return m(0, 0);
}

}  // namespace lbs
