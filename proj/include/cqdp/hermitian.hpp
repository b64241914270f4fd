#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "cqdp/errors.hpp"

namespace cqdp {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Dense complex matrix, row-major. Plain container for eigenvector bases and
// intermediate products; carries no algebraic invariant.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(check_shape(rows, cols)) {}

  ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    check_shape(rows, cols);
    if (a_.size() != static_cast<std::size_t>(rows) * cols)
      throw InvalidInput("ComplexMatrix: entry count does not match shape");
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  Complex operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<Complex>& entries() const { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("ComplexMatrix product: inner dimensions differ");
    ComplexMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

 private:
  static std::size_t check_shape(int rows, int cols) {
    if (rows < 1 || cols < 1) throw InvalidInput("ComplexMatrix: dimensions must be positive");
    return static_cast<std::size_t>(rows) * cols;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

// Dense complex Hermitian matrix. Construction symmetrizes H <- (H + H*)/2 to
// kill representation drift; asymmetry beyond 1e-8 (relative to the entry
// scale) is rejected rather than silently fixed.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int dim) : dim_(check_dim(dim)), a_(static_cast<std::size_t>(dim) * dim) {}

  HermitianMatrix(int dim, std::vector<Complex> entries) : dim_(check_dim(dim)), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(dim_) * dim_)
      throw InvalidInput("HermitianMatrix: entry count does not match dim*dim");
    double scale = 0.0;
    for (const Complex& z : a_) {
      if (!is_finite(z)) throw InvalidInput("HermitianMatrix: non-finite entry");
      scale = std::max(scale, std::abs(z));
    }
    double asym = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j)
        asym = std::max(asym, std::abs(at(i, j) - std::conj(at(j, i))));
    if (asym > 1e-8 * std::max(1.0, scale))
      throw InvalidInput("HermitianMatrix: input is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) {
        const Complex h = 0.5 * (at(i, j) + std::conj(at(j, i)));
        at(i, j) = h;
        at(j, i) = std::conj(h);
      }
  }

  static HermitianMatrix identity(int dim) {
    HermitianMatrix h(dim);
    for (int i = 0; i < dim; ++i) h.at(i, i) = 1.0;
    return h;
  }

  static HermitianMatrix diagonal(const std::vector<double>& d) {
    HermitianMatrix h(static_cast<int>(d.size()));
    for (int i = 0; i < h.dim_; ++i) {
      if (!std::isfinite(d[i])) throw InvalidInput("HermitianMatrix::diagonal: non-finite entry");
      h.at(i, i) = d[i];
    }
    return h;
  }

  // |u><u| for a complex vector u.
  static HermitianMatrix outer(const std::vector<Complex>& u) {
    HermitianMatrix h(static_cast<int>(u.size()));
    for (int i = 0; i < h.dim_; ++i)
      for (int j = 0; j < h.dim_; ++j) h.at(i, j) = u[i] * std::conj(u[j]);
    return h;
  }

  int dim() const { return dim_; }
  Complex operator()(int i, int j) const { return at(i, j); }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i).real();
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix to_matrix() const { return ComplexMatrix(dim_, dim_, a_); }

  friend HermitianMatrix operator+(const HermitianMatrix& x, const HermitianMatrix& y) {
    return combined(x, y, 1.0);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& x, const HermitianMatrix& y) {
    return combined(x, y, -1.0);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& x) {
    if (!std::isfinite(s)) throw InvalidInput("HermitianMatrix scale: non-finite factor");
    HermitianMatrix r(x.dim_);
    for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = s * x.a_[k];
    return r;
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1) throw InvalidInput("HermitianMatrix: dim must be >= 1");
    return dim;
  }

  static HermitianMatrix combined(const HermitianMatrix& x, const HermitianMatrix& y, double sign) {
    if (x.dim_ != y.dim_) throw InvalidInput("HermitianMatrix sum: dimension mismatch");
    HermitianMatrix r(x.dim_);
    for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + sign * y.a_[k];
    return r;
  }

  Complex& at(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  Complex at(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

  int dim_;
  std::vector<Complex> a_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

namespace detail {

inline double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(2.0 * s);
}

// One two-sided Jacobi rotation zeroing A(p,q); accumulates the unitary in V.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Complex sp = s * phase;

  const int n = a.rows();
  // A <- U* A U with U = [[c, s*phase], [-s*conj(phase), c]] on (p,q).
  for (int k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - std::conj(sp) * akq;
    a(k, q) = sp * akp + c * akq;
  }
  for (int k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - sp * aqk;
    a(q, k) = std::conj(sp) * apk + c * aqk;
  }
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (int k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - std::conj(sp) * vkq;
    v(k, q) = sp * vkp + c * vkq;
  }
}

}  // namespace detail

// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
// Converged when the off-diagonal Frobenius mass drops below 1e-14 * ||H||_F;
// dimensions here stay small enough that the quadratic sweep cost is irrelevant.
inline EigenDecomposition eigh(const HermitianMatrix& h) {
  const int n = h.dim();
  ComplexMatrix a = h.to_matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double norm = h.frobenius_norm();
  if (norm > 0.0) {
    const double stop = 1e-14 * norm;
    constexpr int kMaxSweeps = 100;
    bool converged = detail::off_diagonal_mass(a) <= stop;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
      for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
      converged = detail::off_diagonal_mass(a) <= stop;
    }
    if (!converged) throw NumericalFailure("eigh: Jacobi did not converge within sweep limit");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    dec.eigenvalues[k] = a(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) dec.eigenvectors(i, k) = v(i, order[k]);
  }
  return dec;
}

inline double min_eigenvalue(const HermitianMatrix& h) { return eigh(h).eigenvalues.front(); }
inline double max_eigenvalue(const HermitianMatrix& h) { return eigh(h).eigenvalues.back(); }

inline bool is_psd(const HermitianMatrix& h, double tol = 1e-9) {
  if (!(tol >= 0.0)) throw InvalidInput("is_psd: tolerance must be >= 0");
  return min_eigenvalue(h) >= -tol;
}

// V diag(fn(lambda)) V* over a previously computed decomposition.
inline HermitianMatrix spectral_map(const EigenDecomposition& dec,
                                    const std::function<double(double)>& fn) {
  const int n = dec.eigenvectors.rows();
  std::vector<Complex> out(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double w = fn(dec.eigenvalues[k]);
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const Complex vik = dec.eigenvectors(i, k);
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i) * n + j] += w * vik * std::conj(dec.eigenvectors(j, k));
    }
  }
  return HermitianMatrix(n, std::move(out));
}

// Inverse of a strictly positive definite matrix; eigenvalues at or below tol
// are a hard error so that downstream certificates never see a regularized
// inverse.
inline HermitianMatrix inverse_pd(const HermitianMatrix& h, double tol = 1e-12) {
  const EigenDecomposition dec = eigh(h);
  if (dec.eigenvalues.front() <= tol)
    throw NotPositiveDefinite("inverse_pd: minimum eigenvalue " +
                              std::to_string(dec.eigenvalues.front()) + " <= tolerance");
  return spectral_map(dec, [](double lam) { return 1.0 / lam; });
}

// Tr(AB) for Hermitian A, B; mathematically real, so any imaginary residue
// beyond 1e-12 * scale means the inputs were not Hermitian.
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("trace_product: dimension mismatch");
  Complex t = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t += a(i, j) * b(j, i);
  const double scale = std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
  if (std::abs(t.imag()) > 1e-12 * scale)
    throw InvalidInput("trace_product: imaginary residue exceeds tolerance");
  return t.real();
}

inline int rank_with_cutoff(const EigenDecomposition& dec, double cutoff) {
  int r = 0;
  for (double lam : dec.eigenvalues)
    if (lam > cutoff) ++r;
  return r;
}

}  // namespace cqdp
