#pragma once

#include <cmath>

#include "cqdp/dp.hpp"
#include "cqdp/errors.hpp"
#include "cqdp/hermitian.hpp"

namespace cqdp {

// Interpolation parameter of the two-state family (1-theta)*rho + theta*sigma.
class Theta {
 public:
  explicit Theta(double v) : v_(v) {
    if (!std::isfinite(v_) || v_ < 0.0 || v_ > 1.0)
      throw InvalidInput("Theta: value must lie in [0,1]");
  }
  double value() const { return v_; }

 private:
  double v_;
};

struct FisherResult {
  double theta = 0.0;
  double value = 0.0;
  // Set when the pair leaves a common support, where the information of the
  // interpolation family is unbounded; `value` is meaningless then.
  bool infinite = false;
};

// Scalar kernel of the Fisher sum: (a-b)^2 / ((1-theta)a + theta*b).
// Degree-1 positively homogeneous and subadditive on (0,inf)^2.
inline double fisher_kernel(Theta theta, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidInput("fisher_kernel: arguments must be positive and finite");
  const double th = theta.value();
  const double d = a - b;
  return d * d / ((1.0 - th) * a + th * b);
}

// Classical Fisher information of the interpolation family between p and q:
// the kernel summed over the coordinates where both weights are positive.
// Entries below `support_cutoff` count as zero; a coordinate where exactly one
// side vanishes marks the result infinite.
inline FisherResult fisher_classical(Theta theta, const ProbabilityVector& p,
                                     const ProbabilityVector& q,
                                     double support_cutoff = 1e-12) {
  if (p.dim() != q.dim()) throw InvalidInput("fisher_classical: dimension mismatch");
  FisherResult res{theta.value(), 0.0, false};
  for (int k = 0; k < p.dim(); ++k) {
    const bool a = p[k] >= support_cutoff;
    const bool b = q[k] >= support_cutoff;
    if (a && b) {
      res.value += fisher_kernel(theta, p[k], q[k]);
    } else if (a != b) {
      res.infinite = true;
      res.value = 0.0;
      return res;
    }
  }
  return res;
}

// Quantum (right-logarithmic-derivative) Fisher information of the family:
// Tr (sigma-rho)^2 ((1-theta)rho + theta*sigma)^{-1}. A singular mixture
// signals a support mismatch and is surfaced, never regularized.
inline FisherResult fisher_quantum(Theta theta, const HermitianMatrix& rho,
                                   const HermitianMatrix& sigma, double pd_tol = 1e-12) {
  if (rho.dim() != sigma.dim()) throw InvalidInput("fisher_quantum: dimension mismatch");
  const double th = theta.value();
  const HermitianMatrix mix = (1.0 - th) * rho + th * sigma;
  const HermitianMatrix diff = sigma - rho;
  const ComplexMatrix d2 = diff.to_matrix() * diff.to_matrix();
  const double value =
      trace_product(HermitianMatrix(d2.rows(), d2.entries()), inverse_pd(mix, pd_tol));
  return FisherResult{th, std::max(value, 0.0), false};
}

// Fisher information of a pair from the rank-one-perturbed identity family
//   state_i = (I + t |u_i><u_i|) / (dim + t),  |<u_i|u_j>| = c,
// in closed form: t^2/(dim+t) * (1-c^2)(2+t) / (1 + t + t^2 theta(1-theta)(1-c^2)).
inline double witness_fisher_value(Theta theta, int dim, double t, double c) {
  if (dim < 2) throw InvalidInput("witness_fisher_value: dim must be >= 2");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("witness_fisher_value: t must be >= 0");
  if (!(c >= 0.0) || !(c < 1.0)) throw InvalidInput("witness_fisher_value: c must lie in [0,1)");
  const double th = theta.value();
  const double one_minus_c2 = (1.0 - c) * (1.0 + c);
  return t * t / (dim + t) * one_minus_c2 * (2.0 + t) /
         (1.0 + t + t * t * th * (1.0 - th) * one_minus_c2);
}

}  // namespace cqdp
