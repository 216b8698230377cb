#pragma once

#include <cmath>
#include <vector>

#include "lbs/core/error.hpp"
#include "lbs/diff/tape.hpp"

namespace lbs {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 0.0;  // global norm; 0 disables
};

// Adam over a fixed parameter set. step() consumes the accumulated gradients
// (clipping by global norm if configured) and zeroes them afterwards.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Param*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {}

  // Returns the pre-clip global gradient norm.
  double step() {
    double sq = 0.0;
    for (Param* p : params_) sq += p->grad.squaredNorm();
    if (!std::isfinite(sq)) {
      std::string who;
      for (Param* p : params_)
        if (!p->grad.allFinite()) {
          who = p->name;
          break;
        }
      throw NumericalError("non-finite gradient in parameter '" + who + "'");
    }
    const double norm = std::sqrt(sq);
    const double scale = (cfg_.grad_clip > 0.0 && norm > cfg_.grad_clip) ? cfg_.grad_clip / norm : 1.0;

    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, double(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, double(t_));
    for (Param* p : params_) {
      Matrix g = p->grad * scale;
      p->m = cfg_.beta1 * p->m + (1.0 - cfg_.beta1) * g;
      p->v = cfg_.beta2 * p->v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
      p->value.array() -=
          cfg_.lr * (p->m.array() / bc1) / ((p->v.array() / bc2).sqrt() + cfg_.eps);
      if (!p->value.allFinite())
        throw NumericalError("non-finite value in parameter '" + p->name + "' after update");
      p->grad.setZero();
    }
    return norm;
  }

  void zero_grad() {
    for (Param* p : params_) p->grad.setZero();
  }

  long steps_taken() const { return t_; }
  const std::vector<Param*>& params() const { return params_; }

 private:
  std::vector<Param*> params_;
  AdamConfig cfg_;
  long t_ = 0;
};

}  // namespace lbs
