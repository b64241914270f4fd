#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "cqdp/errors.hpp"

namespace cqdp {

// Equality-form linear program: maximize cost(x) subject to A x = rhs, x >= 0.
// Columns are produced on demand so exponentially wide problems never
// materialize the full matrix.
struct EqualityLP {
  int rows = 0;
  long cols = 0;
  std::function<void(long, double*)> column;  // writes `rows` entries of column j
  std::function<double(long)> cost;
  std::vector<double> rhs;  // nonnegative
};

struct SimplexOptions {
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  long max_iterations = 1000000;
};

struct SimplexSolution {
  double objective = 0.0;
  std::vector<std::pair<long, double>> basis;  // structural (column, value), value > 0
  long iterations = 0;
};

namespace detail {

// Gaussian elimination with partial pivoting; a is row-major n x n, consumed.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-13)
      throw NumericalFailure("simplex: basis matrix is numerically singular");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
    b[r] = s / a[r * n + r];
  }
  return b;
}

}  // namespace detail

// Two-phase primal simplex with Bland's anti-cycling rule. Built for tiny row
// counts (the basis is refactorized every iteration), wide column sets.
class SimplexSolver {
 public:
  SimplexSolver(const EqualityLP& lp, const SimplexOptions& opt = {}) : lp_(lp), opt_(opt) {
    if (lp_.rows < 1 || lp_.cols < 1) throw InvalidInput("simplex: empty program");
    for (double r : lp_.rhs)
      if (!(r >= 0.0)) throw InvalidInput("simplex: rhs must be nonnegative");
    if (static_cast<int>(lp_.rhs.size()) != lp_.rows)
      throw InvalidInput("simplex: rhs size does not match row count");
  }

  SimplexSolution solve() {
    const int m = lp_.rows;
    basis_.resize(m);
    for (int i = 0; i < m; ++i) basis_[i] = lp_.cols + i;  // artificial start
    in_basis_.assign(lp_.cols, false);

    run_phase(/*phase1=*/true);
    refresh_values();
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis_[i] >= lp_.cols) infeas += std::abs(values_[i]);
    if (infeas > opt_.feasibility_tol)
      throw NumericalFailure("simplex: phase 1 left infeasibility " + std::to_string(infeas));
    expel_artificials();

    run_phase(/*phase1=*/false);
    refresh_values();

    SimplexSolution sol;
    sol.iterations = iterations_;
    for (int i = 0; i < m; ++i) {
      if (basis_[i] >= lp_.cols) continue;  // artificial pinned at zero
      sol.objective += lp_.cost(basis_[i]) * values_[i];
      if (values_[i] > 0.0) sol.basis.emplace_back(basis_[i], values_[i]);
    }
    return sol;
  }

 private:
  double cost_of(long j, bool phase1) const {
    if (phase1) return j >= lp_.cols ? -1.0 : 0.0;
    return j >= lp_.cols ? 0.0 : lp_.cost(j);
  }

  void fetch_column(long j, double* out) const {
    if (j >= lp_.cols) {
      for (int i = 0; i < lp_.rows; ++i) out[i] = 0.0;
      out[j - lp_.cols] = 1.0;
    } else {
      lp_.column(j, out);
    }
  }

  std::vector<double> basis_matrix() const {
    const int m = lp_.rows;
    std::vector<double> b(static_cast<std::size_t>(m) * m);
    std::vector<double> col(m);
    for (int c = 0; c < m; ++c) {
      fetch_column(basis_[c], col.data());
      for (int r = 0; r < m; ++r) b[static_cast<std::size_t>(r) * m + c] = col[r];
    }
    return b;
  }

  void refresh_values() { values_ = detail::solve_dense(basis_matrix(), lp_.rhs, lp_.rows); }

  std::vector<double> multipliers(bool phase1) const {
    const int m = lp_.rows;
    std::vector<double> bt(static_cast<std::size_t>(m) * m);
    const std::vector<double> b = basis_matrix();
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) bt[static_cast<std::size_t>(c) * m + r] = b[static_cast<std::size_t>(r) * m + c];
    std::vector<double> cb(m);
    for (int i = 0; i < m; ++i) cb[i] = cost_of(basis_[i], phase1);
    return detail::solve_dense(std::move(bt), std::move(cb), m);
  }

  void run_phase(bool phase1) {
    const int m = lp_.rows;
    std::vector<double> col(m);
    while (true) {
      if (++iterations_ > opt_.max_iterations)
        throw NumericalFailure("simplex: iteration limit reached");
      refresh_values();
      const std::vector<double> y = multipliers(phase1);

      // Bland: entering column is the lowest index with positive reduced cost.
      // Artificials never re-enter; only structural columns are priced.
      long entering = -1;
      for (long j = 0; j < lp_.cols; ++j) {
        if (in_basis_[j]) continue;
        fetch_column(j, col.data());
        double rc = cost_of(j, phase1);
        for (int i = 0; i < m; ++i) rc -= y[i] * col[i];
        if (rc > opt_.pivot_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;  // optimal for this phase

      fetch_column(entering, col.data());
      const std::vector<double> dir = detail::solve_dense(basis_matrix(), col, m);
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (dir[i] > opt_.pivot_tol) {
          const double ratio = std::max(values_[i], 0.0) / dir[i];
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) throw NumericalFailure("simplex: unbounded direction encountered");
      if (basis_[leave] < lp_.cols) in_basis_[basis_[leave]] = false;
      basis_[leave] = entering;
      in_basis_[entering] = true;
    }
  }

  // After phase 1, any artificial still basic sits at value ~0; replace it
  // with a structural column whenever one can pivot in.
  void expel_artificials() {
    const int m = lp_.rows;
    std::vector<double> col(m);
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < lp_.cols) continue;
      bool replaced = false;
      for (long j = 0; j < lp_.cols && !replaced; ++j) {
        if (in_basis_[j]) continue;
        fetch_column(j, col.data());
        const std::vector<double> dir = detail::solve_dense(basis_matrix(), col, m);
        if (std::abs(dir[i]) > opt_.pivot_tol) {
          basis_[i] = j;
          in_basis_[j] = true;
          replaced = true;
        }
      }
      if (!replaced)
        throw NumericalFailure("simplex: constraint row has no structural pivot (rank deficient)");
    }
  }

  const EqualityLP& lp_;
  SimplexOptions opt_;
  std::vector<long> basis_;
  std::vector<char> in_basis_;
  std::vector<double> values_;
  long iterations_ = 0;
};

inline SimplexSolution simplex_maximize(const EqualityLP& lp, const SimplexOptions& opt = {}) {
  return SimplexSolver(lp, opt).solve();
}

}  // namespace cqdp
