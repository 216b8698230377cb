#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lbs/core/error.hpp"
#include "lbs/core/rng.hpp"

namespace lbs {

enum class StochMode { kNone, kFrozen, kEvolving };

// Continuous Mountain Car and its two stochastic variants. The stochastic
// versions append a NoisyState in [-1, 1] plus a one-dimensional remote
// action: remote > 0 resamples the NoisyState uniformly; in Frozen mode the
// (position, velocity) pair is then held fixed, in Evolving mode it follows
// the dynamics with zero force.
class MountainCar {
 public:
  static constexpr double kMinPos = -1.2;
  static constexpr double kMaxPos = 0.6;
  static constexpr double kMinVel = -0.07;
  static constexpr double kMaxVel = 0.07;
  static constexpr double kGoalPos = 0.45;
  static constexpr double kPower = 0.0015;
  static constexpr double kGravity = 0.0025;

  struct Step {
    Eigen::VectorXd state;
    double reward = 0.0;
    bool done = false;
  };

  explicit MountainCar(StochMode mode = StochMode::kNone, int episode_horizon = 1000)
      : mode_(mode), horizon_(episode_horizon) {}

  int state_dim() const { return mode_ == StochMode::kNone ? 2 : 3; }
  int action_dim() const { return mode_ == StochMode::kNone ? 1 : 2; }

  // One application of the car dynamics; pure, used as the oracle in tests.
  static std::pair<double, double> dynamics(double pos, double vel, double force) {
    double v = vel + force * kPower - kGravity * std::cos(3.0 * pos);
    v = std::clamp(v, kMinVel, kMaxVel);
    double p = std::clamp(pos + v, kMinPos, kMaxPos);
    return {p, v};
  }

  Eigen::VectorXd reset(Rng& rng) {
    pos_ = rng.uniform(-0.6, -0.4);
    vel_ = 0.0;
    noisy_ = 0.0;
    steps_ = 0;
    return state();
  }

  Step step(const Eigen::VectorXd& action, Rng& rng) {
    if (action.size() != action_dim())
      throw ShapeError("MountainCar: action has " + std::to_string(action.size()) +
                       " dims, expected " + std::to_string(action_dim()));
    const double force = std::clamp(action(0), -1.0, 1.0);

    if (mode_ == StochMode::kNone) {
      std::tie(pos_, vel_) = dynamics(pos_, vel_, force);
    } else {
      const double remote = std::clamp(action(1), -1.0, 1.0);
      if (remote > 0.0) {
        noisy_ = rng.uniform(-1.0, 1.0);
        if (mode_ == StochMode::kEvolving) std::tie(pos_, vel_) = dynamics(pos_, vel_, 0.0);
        // Frozen: position and velocity untouched.
      } else {
        std::tie(pos_, vel_) = dynamics(pos_, vel_, force);
      }
    }

    ++steps_;
    const bool goal = pos_ >= kGoalPos;
    Step out;
    out.state = state();
    out.reward = -0.1 * force * force + (goal ? 100.0 : 0.0);
    out.done = goal || steps_ >= horizon_;
    return out;
  }

  double position() const { return pos_; }
  double velocity() const { return vel_; }
  double noisy() const { return noisy_; }
  StochMode mode() const { return mode_; }

 private:
  Eigen::VectorXd state() const {
    Eigen::VectorXd s(state_dim());
    s(0) = pos_;
    s(1) = vel_;
    if (mode_ != StochMode::kNone) s(2) = noisy_;
    return s;
  }

  StochMode mode_;
  int horizon_;
  double pos_ = -0.5;
  double vel_ = 0.0;
  double noisy_ = 0.0;
  int steps_ = 0;
};

}  // namespace lbs
