#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lbs/stats/running_moments.hpp"

namespace lbs {

// State normalization from running statistics: (x - mean) / max(std, 1e-8),
// clamped to [-10, 10].
class ObservationNormalizer {
 public:
  explicit ObservationNormalizer(Eigen::Index dim) : moments_(dim) {}

  void update(const Eigen::VectorXd& x) { moments_.update(x); }

  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const {
    Eigen::VectorXd sd = moments_.std().cwiseMax(1e-8);
    return ((x - moments_.mean()).cwiseQuotient(sd)).cwiseMax(-10.0).cwiseMin(10.0);
  }

  const RunningMoments& moments() const { return moments_; }

 private:
  RunningMoments moments_;
};

// Reward normalization: rewards are divided by a running estimate of the
// standard deviation of the discounted returns, then clipped to (-3, 3).
class ReturnNormalizer {
 public:
  explicit ReturnNormalizer(double gamma) : gamma_(gamma), moments_(1) {}

  double normalize(double r, bool done) {
    accumulator_ = gamma_ * accumulator_ + r;
    moments_.update(accumulator_);
    const double sd = std::max(moments_.scalar_std(), 1e-8);
    if (done) accumulator_ = 0.0;
    return std::clamp(r / sd, -3.0, 3.0);
  }

  double return_std() const { return moments_.scalar_std(); }
  const RunningMoments& moments() const { return moments_; }

 private:
  double gamma_;
  double accumulator_ = 0.0;
  RunningMoments moments_;
};

}  // namespace lbs
