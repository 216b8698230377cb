#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "lbs/core/error.hpp"

namespace lbs {

// Welford accumulator over vectors: count, mean, sum of squared deviations.
// Population variance (m2 / n). merge() uses the parallel combination rule so
// merging two accumulators equals accumulating the concatenated stream.
class RunningMoments {
 public:
  explicit RunningMoments(Eigen::Index dim)
      : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {}

  void update(const Eigen::VectorXd& x) {
    if (x.size() != mean_.size())
      throw ShapeError("RunningMoments: dimension mismatch, " + std::to_string(x.size()) + " vs " +
                       std::to_string(mean_.size()));
    ++count_;
    Eigen::VectorXd delta = x - mean_;
    mean_ += delta / double(count_);
    m2_ += delta.cwiseProduct(x - mean_);
  }

  void update(double x) {
    Eigen::VectorXd v(1);
    v(0) = x;
    update(v);
  }

  void merge(const RunningMoments& other) {
    if (other.mean_.size() != mean_.size()) throw ShapeError("RunningMoments: merge dimension mismatch");
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = double(count_), nb = double(other.count_);
    Eigen::VectorXd delta = other.mean_ - mean_;
    mean_ = (na * mean_ + nb * other.mean_) / (na + nb);
    m2_ += other.m2_ + delta.cwiseProduct(delta) * (na * nb / (na + nb));
    count_ += other.count_;
  }

  std::uint64_t count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }

  Eigen::VectorXd variance() const {
    if (count_ == 0) return Eigen::VectorXd::Zero(mean_.size());
    return (m2_ / double(count_)).cwiseMax(0.0);
  }

  Eigen::VectorXd std() const { return variance().cwiseSqrt(); }

  double scalar_mean() const { return mean_(0); }
  double scalar_std() const { return std()(0); }

 private:
  std::uint64_t count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
};

}  // namespace lbs
