#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "cqdp/dp.hpp"
#include "cqdp/errors.hpp"
#include "cqdp/hermitian.hpp"

namespace cqdp {

// A family of unit vectors whose pairwise inner products all share one
// magnitude (the coherence).
class UnitVectorSystem {
 public:
  UnitVectorSystem(int dim, std::vector<std::vector<Complex>> vectors, double coherence)
      : dim_(dim), vecs_(std::move(vectors)), c_(coherence) {
    if (dim_ < 1) throw InvalidInput("UnitVectorSystem: dim must be >= 1");
    if (vecs_.size() < 2) throw InvalidInput("UnitVectorSystem: need at least 2 vectors");
    if (!(c_ >= 0.0) || c_ > 1.0 + 1e-12) throw InvalidInput("UnitVectorSystem: coherence outside [0,1]");
    for (const auto& u : vecs_) {
      if (static_cast<int>(u.size()) != dim_)
        throw InvalidInput("UnitVectorSystem: vector length does not match dim");
      if (std::abs(std::sqrt(norm2(u)) - 1.0) > 1e-10)
        throw InvalidInput("UnitVectorSystem: vector is not unit length");
    }
    for (int i = 0; i < count(); ++i)
      for (int j = i + 1; j < count(); ++j)
        if (std::abs(std::abs(inner(i, j)) - c_) > 1e-8)
          throw InvalidInput("UnitVectorSystem: pairwise coherence deviates from " + std::to_string(c_));
  }

  int count() const { return static_cast<int>(vecs_.size()); }
  int dim() const { return dim_; }
  double coherence() const { return c_; }
  const std::vector<Complex>& vector(int i) const { return vecs_[i]; }

  Complex inner(int i, int j) const {
    Complex s = 0.0;
    for (int k = 0; k < dim_; ++k) s += std::conj(vecs_[i][k]) * vecs_[j][k];
    return s;
  }

 private:
  static double norm2(const std::vector<Complex>& u) {
    double s = 0.0;
    for (Complex z : u) s += std::norm(z);
    return s;
  }

  int dim_;
  std::vector<std::vector<Complex>> vecs_;
  double c_;
};

namespace detail {

// Columns of a factor B with B*B = gram, keeping eigenvalues above the cutoff
// and padding the vectors to `target_dim` entries.
inline std::vector<std::vector<Complex>> gram_factor_columns(const HermitianMatrix& gram,
                                                             int target_dim, double cutoff) {
  const EigenDecomposition dec = eigh(gram);
  std::vector<int> kept;
  for (int k = 0; k < gram.dim(); ++k)
    if (dec.eigenvalues[k] > cutoff) kept.push_back(k);
  if (static_cast<int>(kept.size()) > target_dim)
    throw NumericalFailure("gram_factor_columns: rank exceeds target dimension");

  std::vector<std::vector<Complex>> cols(gram.dim(), std::vector<Complex>(target_dim, Complex{}));
  for (std::size_t row = 0; row < kept.size(); ++row) {
    const int k = kept[row];
    const double w = std::sqrt(dec.eigenvalues[k]);
    for (int j = 0; j < gram.dim(); ++j)
      cols[j][row] = w * std::conj(dec.eigenvectors(j, k));
  }
  return cols;
}

inline HermitianMatrix equiangular_gram(int m, Complex z) {
  std::vector<Complex> a(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      a[static_cast<std::size_t>(i) * m + j] = i == j ? Complex{1.0} : (i < j ? z : std::conj(z));
  return HermitianMatrix(m, std::move(a));
}

}  // namespace detail

// n real unit vectors in R^n with every pairwise inner product equal to c,
// obtained by factoring the Gram matrix (1-c)I + c * ones.
inline UnitVectorSystem equiangular_real(int n, double c) {
  if (n < 2) throw InvalidInput("equiangular_real: n must be >= 2");
  if (!(c >= 0.0) || !(c <= 1.0)) throw InvalidInput("equiangular_real: c must lie in [0,1]");
  const HermitianMatrix gram = detail::equiangular_gram(n, Complex{c});
  return UnitVectorSystem(n, detail::gram_factor_columns(gram, n, 1e-11), c);
}

// d+1 unit vectors in C^d with pairwise coherence c, which exists for
// c >= 1/d. The Gram candidate A(z) has ones on the diagonal and z above it;
// its smallest eigenvalue moves from 1-c >= 0 at z = c to 1-dc <= 0 at
// z = -c, so a root lies on the arc z = c e^{i phi}, found by bisection.
inline UnitVectorSystem equiangular_complex(int d, double c) {
  if (d < 2) throw InvalidInput("equiangular_complex: d must be >= 2");
  if (!(c <= 1.0)) throw InvalidInput("equiangular_complex: c must lie in [1/d, 1]");
  if (!(c * d >= 1.0)) throw InvalidInput("equiangular_complex: need c >= 1/d for existence");

  const int m = d + 1;
  const auto lam_min = [&](double phi) {
    return min_eigenvalue(detail::equiangular_gram(m, std::polar(c, phi)));
  };

  constexpr double kRootTol = 1e-12;
  double lo = 0.0, hi = std::numbers::pi;
  double root = hi;
  if (std::abs(lam_min(lo)) <= kRootTol) {
    root = lo;  // c = 1: the rank-one all-ones Gram is already singular
  } else if (std::abs(lam_min(hi)) > kRootTol) {
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double lm = lam_min(mid);
      if (std::abs(lm) <= kRootTol) {
        root = mid;
        break;
      }
      (lm > 0.0 ? lo : hi) = mid;
      root = hi;
    }
  }

  const HermitianMatrix gram = detail::equiangular_gram(m, std::polar(c, root));
  return UnitVectorSystem(d, detail::gram_factor_columns(gram, d, 1e-11), c);
}

// Parameters of the rank-one-perturbed identity construction. t_max is the
// largest perturbation strength that keeps the tuple private at eps;
// computed through the rationalized form s(sqrt(D)+s)/(2(1-c^2)e^eps), which
// stays stable as c approaches 1 where the direct quotient cancels.
struct WitnessParams {
  double eps = 0.0;
  double c = 0.0;
  double t = 0.0;  // defaults to t_max
  double discriminant = 0.0;
  double t_max = 0.0;
};

inline WitnessParams witness_params(double eps, double c) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("witness_params: eps must be > 0");
  if (!(c >= 0.0) || !(c < 1.0))
    throw InvalidInput("witness_params: c must lie in [0,1); the bound diverges at c = 1");
  const double s = std::expm1(eps);
  const double one_minus_c2 = (1.0 - c) * (1.0 + c);
  WitnessParams p;
  p.eps = eps;
  p.c = c;
  p.discriminant = s * s + 4.0 * one_minus_c2 * std::exp(eps);
  p.t_max = s * (std::sqrt(p.discriminant) + s) / (2.0 * one_minus_c2 * std::exp(eps));
  p.t = p.t_max;
  return p;
}

// Density tuple rho_i = (I + t |u_i><u_i|) / (dim + t) over a unit-vector
// system. Private at eps whenever t <= witness_params(eps, coherence).t_max.
inline DensityTuple witness_tuple(const UnitVectorSystem& sys, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("witness_tuple: t must be > 0");
  const int d = sys.dim();
  const double norm = 1.0 / (d + t);
  std::vector<HermitianMatrix> states;
  states.reserve(sys.count());
  for (int i = 0; i < sys.count(); ++i)
    states.push_back(norm * (HermitianMatrix::identity(d) + t * HermitianMatrix::outer(sys.vector(i))));
  return DensityTuple(std::move(states));
}

// Measure-and-prepare channel X -> sum_k <k|X|k> sigma_k. Feeding it a
// classical tuple produces the essentially classical tuple with the same
// mixing weights; privacy is preserved by linearity.
class MixtureChannel {
 public:
  explicit MixtureChannel(std::vector<HermitianMatrix> components) : sigmas_(std::move(components)) {
    if (sigmas_.empty()) throw InvalidInput("MixtureChannel: need at least one component");
    for (const auto& s : sigmas_) {
      if (s.dim() != sigmas_.front().dim())
        throw InvalidInput("MixtureChannel: mixed component dimensions");
      if (std::abs(s.trace() - 1.0) > 1e-10)
        throw InvalidInput("MixtureChannel: component trace != 1");
      if (!is_psd(s, 1e-9)) throw InvalidInput("MixtureChannel: component not positive semi-definite");
    }
  }

  int arity() const { return static_cast<int>(sigmas_.size()); }
  int output_dim() const { return sigmas_.front().dim(); }

  HermitianMatrix apply(const ProbabilityVector& p) const {
    if (p.dim() != arity()) throw InvalidInput("MixtureChannel: weight count does not match components");
    HermitianMatrix out(output_dim());
    for (int k = 0; k < arity(); ++k) out = out + p[k] * sigmas_[k];
    return out;
  }

  DensityTuple apply(const ClassicalTuple& t) const {
    std::vector<HermitianMatrix> states;
    states.reserve(t.size());
    for (int i = 0; i < t.size(); ++i) states.push_back(apply(t[i]));
    return DensityTuple(std::move(states));
  }

 private:
  std::vector<HermitianMatrix> sigmas_;
};

inline HermitianMatrix apply_channel(const std::vector<HermitianMatrix>& sigmas,
                                     const ProbabilityVector& p) {
  return MixtureChannel(sigmas).apply(p);
}

}  // namespace cqdp
