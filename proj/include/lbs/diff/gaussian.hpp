#pragma once

#include <cmath>

#include "lbs/core/error.hpp"
#include "lbs/diff/tape.hpp"

namespace lbs {

inline constexpr double kLn2Pi = 1.8378770664093454836;  // ln(2*pi)

// Diagonal Gaussian over a vector, the distribution type for the latent
// prior/posterior, the reconstruction head and the policy.
struct DiagonalGaussian {
  Vector mean;
  Vector std;

  Eigen::Index dim() const { return mean.size(); }
};

namespace detail {
inline void require_same_dim(const char* op, Eigen::Index a, Eigen::Index b) {
  if (a != b)
    throw ShapeError(std::string(op) + ": dimension mismatch, " + std::to_string(a) + " vs " +
                     std::to_string(b));
}
}  // namespace detail

// KL(q || p) in closed form; nonnegative, zero iff q == p componentwise.
inline double kl_divergence(const DiagonalGaussian& q, const DiagonalGaussian& p) {
  detail::require_same_dim("kl_divergence", q.dim(), p.dim());
  double kl = 0.0;
  for (Eigen::Index i = 0; i < q.dim(); ++i) {
    const double vr = q.std(i) / p.std(i);
    const double dm = q.mean(i) - p.mean(i);
    kl += -std::log(vr) + 0.5 * (vr * vr + dm * dm / (p.std(i) * p.std(i)) - 1.0);
  }
  return kl;
}

inline double log_density(const DiagonalGaussian& d, const Vector& x) {
  detail::require_same_dim("log_density", d.dim(), x.size());
  double lp = 0.0;
  for (Eigen::Index i = 0; i < d.dim(); ++i) {
    const double z = (x(i) - d.mean(i)) / d.std(i);
    lp += -0.5 * z * z - std::log(d.std(i)) - 0.5 * kLn2Pi;
  }
  return lp;
}

// H[d] = sum_i 0.5 * ln(2*pi*e*std_i^2)
inline double entropy(const DiagonalGaussian& d) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < d.dim(); ++i) h += 0.5 * (kLn2Pi + 1.0) + std::log(d.std(i));
  return h;
}

// H[q, p] = E_q[-ln p]
inline double cross_entropy(const DiagonalGaussian& q, const DiagonalGaussian& p) {
  detail::require_same_dim("cross_entropy", q.dim(), p.dim());
  double h = 0.0;
  for (Eigen::Index i = 0; i < q.dim(); ++i) {
    const double dm = q.mean(i) - p.mean(i);
    h += 0.5 * kLn2Pi + std::log(p.std(i)) +
         (q.std(i) * q.std(i) + dm * dm) / (2.0 * p.std(i) * p.std(i));
  }
  return h;
}

// mean + std (.) noise
inline Vector reparameterized_sample(const DiagonalGaussian& d, const Vector& noise) {
  detail::require_same_dim("reparameterized_sample", d.dim(), noise.size());
  return d.mean + d.std.cwiseProduct(noise);
}

// Distributional head: std = softplus(raw) + floor, mean passed through.
inline DiagonalGaussian gaussian_head(const Vector& raw_mean, const Vector& raw_std,
                                      double std_floor = 1e-5) {
  detail::require_same_dim("gaussian_head", raw_mean.size(), raw_std.size());
  DiagonalGaussian g;
  g.mean = raw_mean;
  g.std = raw_std.unaryExpr([std_floor](double v) { return detail::softplus(v) + std_floor; });
  return g;
}

// ---------------------------------------------------------------------------
// Tape-side versions. Batched: mean/std are n x d, one distribution per row;
// the reductions below return an n x 1 column (one value per sample).
// ---------------------------------------------------------------------------

struct GaussianVar {
  Var mean;
  Var std;
};

// raw: n x 2d, first half means, second half std logits.
inline GaussianVar gaussian_head(Tape& t, Var raw, double std_floor = 1e-5) {
  const Eigen::Index d2 = raw.cols();
  if (d2 % 2 != 0) throw ShapeError("gaussian_head: raw output width must be even");
  const Eigen::Index d = d2 / 2;
  Var mean = t.slice_cols(raw, 0, d);
  Var std = t.add_const(t.softplus(t.slice_cols(raw, d, d)), std_floor);
  return {mean, std};
}

inline Var kl_divergence(Tape& t, const GaussianVar& q, const GaussianVar& p) {
  Var dm = t.sub(q.mean, p.mean);
  Var num = t.add(t.square(q.std), t.square(dm));
  Var den = t.mul_const(t.square(p.std), 2.0);
  Var terms = t.add(t.sub(t.log(p.std), t.log(q.std)), t.add_const(t.div(num, den), -0.5));
  return t.row_sum(terms);
}

// x may be a constant node holding observed values.
inline Var gaussian_log_density(Tape& t, const GaussianVar& g, Var x) {
  Var z = t.div(t.sub(x, g.mean), g.std);
  Var terms = t.add_const(t.sub(t.mul_const(t.square(z), -0.5), t.log(g.std)), -0.5 * kLn2Pi);
  return t.row_sum(terms);
}

inline Var entropy(Tape& t, const GaussianVar& g) {
  return t.row_sum(t.add_const(t.log(g.std), 0.5 * (kLn2Pi + 1.0)));
}

inline Var reparameterized_sample(Tape& t, const GaussianVar& g, const Matrix& noise) {
  return t.add(g.mean, t.mul(g.std, t.constant(noise)));
}

}  // namespace lbs
