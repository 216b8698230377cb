#pragma once

#include <string>
#include <vector>

#include "lbs/core/error.hpp"
#include "lbs/core/rng.hpp"
#include "lbs/diff/tape.hpp"

namespace lbs {

enum class Activation { kRelu, kLeakyRelu };

// Orthogonal matrix via QR of a Gaussian draw, sign-fixed so the factorization
// is unique, scaled by gain.
inline Matrix orthogonal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double gain) {
  const bool tall = rows >= cols;
  const Eigen::Index big = tall ? rows : cols;
  const Eigen::Index small = tall ? cols : rows;
  Matrix a = rng.normal_matrix(big, small);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(big, small);
  Matrix r = qr.matrixQR().topRows(small).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < small; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  Matrix out = tall ? q : Matrix(q.transpose());
  return gain * out;
}

// Fully connected net: widths = [in, hidden..., out], activation on every
// layer except the last. Weights are stored input-major (in x out) so a batch
// forward is X * W + b with X holding one sample per row.
class Mlp {
 public:
  Mlp() = default;

  Mlp(std::string name, std::vector<int> widths, Activation act)
      : name_(std::move(name)), widths_(std::move(widths)), act_(act) {
    if (widths_.size() < 2) throw ShapeError("Mlp: need at least input and output widths");
    for (int w : widths_)
      if (w <= 0) throw ShapeError("Mlp: layer widths must be positive");
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
      weights_.emplace_back(name_ + ".W" + std::to_string(l), Matrix::Zero(widths_[l], widths_[l + 1]));
      biases_.emplace_back(name_ + ".b" + std::to_string(l), Matrix::Zero(1, widths_[l + 1]));
    }
  }

  // Uniform fan-in scaling: W ~ U(-1/sqrt(in), 1/sqrt(in)), b = 0.
  void init_uniform_fanin(Rng& rng) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const double limit = 1.0 / std::sqrt(double(widths_[l]));
      weights_[l].value = rng.uniform_matrix(widths_[l], widths_[l + 1], -limit, limit);
      biases_[l].value.setZero();
    }
  }

  // Orthogonal init with a separate gain for the output layer.
  void init_orthogonal(Rng& rng, double hidden_gain, double out_gain) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const double gain = (l + 1 == weights_.size()) ? out_gain : hidden_gain;
      weights_[l].value = orthogonal_matrix(rng, widths_[l], widths_[l + 1], gain);
      biases_[l].value.setZero();
    }
  }

  void init_zero() {
    for (auto& w : weights_) w.value.setZero();
    for (auto& b : biases_) b.value.setZero();
  }

  // Recorded forward pass over a batch (rows are samples).
  Var forward(Tape& t, Var x) const {
    if (x.cols() != widths_.front())
      throw ShapeError("Mlp " + name_ + ": input has " + std::to_string(x.cols()) +
                       " columns, expected " + std::to_string(widths_.front()));
    Var h = x;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Var w = t.parameter(const_cast<Param&>(weights_[l]));
      Var b = t.parameter(const_cast<Param&>(biases_[l]));
      h = t.add(t.matmul(h, w), t.broadcast_rows(b, h.rows()));
      if (l + 1 < weights_.size()) h = activate(t, h);
    }
    return h;
  }

  // Plain forward, same arithmetic as the recorded pass.
  Matrix forward(const Matrix& x) const {
    if (x.cols() != widths_.front())
      throw ShapeError("Mlp " + name_ + ": input has " + std::to_string(x.cols()) +
                       " columns, expected " + std::to_string(widths_.front()));
    Matrix h = x;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      h = (h * weights_[l].value).rowwise() + biases_[l].value.row(0);
      if (l + 1 < weights_.size()) {
        if (act_ == Activation::kRelu)
          h = h.cwiseMax(0.0);
        else
          h = h.unaryExpr([](double v) { return v > 0.0 ? v : 0.01 * v; });
      }
    }
    return h;
  }

  Vector forward(const Vector& x) const {
    Matrix row = forward(Matrix(x.transpose()));
    return row.row(0).transpose();
  }

  std::vector<Param*> params() {
    std::vector<Param*> out;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      out.push_back(&weights_[l]);
      out.push_back(&biases_[l]);
    }
    return out;
  }

  const std::string& name() const { return name_; }
  int in_dim() const { return widths_.front(); }
  int out_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  Param& weight(std::size_t l) { return weights_[l]; }
  Param& bias(std::size_t l) { return biases_[l]; }
  std::size_t layers() const { return weights_.size(); }

 private:
  Var activate(Tape& t, Var h) const {
    return act_ == Activation::kRelu ? t.relu(h) : t.leaky_relu(h, 0.01);
  }

  std::string name_;
  std::vector<int> widths_;
  Activation act_ = Activation::kRelu;
  std::vector<Param> weights_;
  std::vector<Param> biases_;
};

// widths helper: [in, hidden x n, out]
inline std::vector<int> mlp_widths(int in, int hidden, int hidden_layers, int out) {
  std::vector<int> w;
  w.push_back(in);
  for (int i = 0; i < hidden_layers; ++i) w.push_back(hidden);
  w.push_back(out);
  return w;
}

}  // namespace lbs
