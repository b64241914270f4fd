#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "cqdp/dp.hpp"
#include "cqdp/errors.hpp"
#include "cqdp/fisher.hpp"
#include "cqdp/simplex.hpp"

namespace cqdp {

// The vertex LP enumerates 2^n columns; past this arity it stops being cheap.
inline constexpr int kMaxArity = 16;

namespace detail {

inline void require_eps(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput(std::string(who) + ": eps must be > 0");
}

inline void require_arity(int n, const char* who) {
  if (n < 2) throw InvalidInput(std::string(who) + ": n must be >= 2");
  if (n > kMaxArity) throw ResourceLimit(std::string(who) + ": n exceeds vertex-LP limit");
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace detail

// Positively homogeneous subadditive function on a positive orthant.
// Registration spot-checks both laws on random points; the LP reduction is
// only valid for functions in this class.
class SublinearObjective {
 public:
  SublinearObjective(int arity, std::function<double(std::span<const double>)> f)
      : arity_(arity), f_(std::move(f)) {
    if (arity_ < 1) throw InvalidInput("SublinearObjective: arity must be >= 1");
    std::mt19937_64 rng(0x5b1e);
    std::uniform_real_distribution<double> coord(0.05, 5.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::vector<double> x(arity_), y(arity_), xy(arity_), ax(arity_);
    for (int trial = 0; trial < 100; ++trial) {
      for (int i = 0; i < arity_; ++i) {
        x[i] = coord(rng);
        y[i] = coord(rng);
        xy[i] = x[i] + y[i];
      }
      const double a = scale(rng);
      for (int i = 0; i < arity_; ++i) ax[i] = a * x[i];
      const double fx = f_(x), fy = f_(y);
      const double slack = 1e-8 * std::max({1.0, std::abs(fx), std::abs(fy)});
      if (f_(xy) > fx + fy + slack)
        throw InvalidInput("SublinearObjective: evaluator violates subadditivity");
      if (std::abs(f_(ax) - a * fx) > slack * std::max(1.0, a))
        throw InvalidInput("SublinearObjective: evaluator violates positive homogeneity");
    }
  }

  int arity() const { return arity_; }
  double operator()(std::span<const double> x) const { return f_(x); }

 private:
  int arity_;
  std::function<double(std::span<const double>)> f_;
};

// phi(x) = sum over ordered pairs i != j of the Fisher kernel at (x_i, x_j).
inline SublinearObjective fisher_pair_objective(int n, Theta theta) {
  detail::require_arity(n, "fisher_pair_objective");
  return SublinearObjective(n, [n, theta](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += fisher_kernel(theta, x[i], x[j]);
    return s;
  });
}

// All 2^n vectors in {1, e^eps}^n, addressed by bitmask: bit i set means
// coordinate i equals e^eps.
class VertexSet {
 public:
  VertexSet(int n, double eps) : n_(n), grow_(std::exp(eps)) {
    detail::require_arity(n, "VertexSet");
    detail::require_eps(eps, "VertexSet");
  }

  int n() const { return n_; }
  long count() const { return 1L << n_; }
  double coordinate(std::uint32_t mask, int i) const { return (mask >> i) & 1u ? grow_ : 1.0; }

  void fill(std::uint32_t mask, double* out) const {
    for (int i = 0; i < n_; ++i) out[i] = coordinate(mask, i);
  }

 private:
  int n_;
  double grow_;
};

struct LPSolution {
  double objective = 0.0;
  std::vector<std::pair<std::uint32_t, double>> weights;  // vertex bitmask -> weight
  double residual = 0.0;                                  // ||sum w_v v - 1||_inf
};

// Closed form of the two-state classical supremum: s^2/(((1-theta)s+1)(theta s+1)).
inline double classical_max_pair(double eps, Theta theta) {
  detail::require_eps(eps, "classical_max_pair");
  const double s = std::expm1(eps);
  const double th = theta.value();
  return s * s / (((1.0 - th) * s + 1.0) * (th * s + 1.0));
}

// k(n-k)/(k e^eps + n - k): the per-vertex-class payoff entering the frontier.
inline double group_ratio(int n, int k, double eps) {
  detail::require_eps(eps, "group_ratio");
  return static_cast<double>(k) * (n - k) / (k * std::exp(eps) + n - k);
}

// argmax over 1 <= k <= n/2 of group_ratio; ties fall to the smaller k
// (smaller alphabet).
inline int best_group_size(int n, double eps) {
  if (n < 2) throw InvalidInput("best_group_size: n must be >= 2");
  detail::require_eps(eps, "best_group_size");
  int best = 1;
  for (int k = 2; 2 * k <= n; ++k)
    if (group_ratio(n, k, eps) > group_ratio(n, best, eps)) best = k;
  return best;
}

// Closed form of the n-state classical supremum of the average pairwise
// Fisher information under the privacy constraint.
inline double classical_max(int n, double eps, Theta theta) {
  if (n < 2) throw InvalidInput("classical_max: n must be >= 2");
  detail::require_eps(eps, "classical_max");
  const double grow = std::exp(eps);
  const double kernel_sum = fisher_kernel(theta, grow, 1.0) + fisher_kernel(theta, 1.0, grow);
  return kernel_sum / (n - 1) * group_ratio(n, best_group_size(n, eps), eps);
}

// Vertex linear program: maximize sum_v phi(v) w_v subject to
// sum_v w_v v = 1_n, w >= 0. The all-ones vertex alone is feasible, so the
// program always has an optimum.
inline LPSolution lp_supremum(int n, double eps, const SublinearObjective& phi) {
  detail::require_arity(n, "lp_supremum");
  detail::require_eps(eps, "lp_supremum");
  if (phi.arity() != n) throw InvalidInput("lp_supremum: objective arity does not match n");

  const VertexSet verts(n, eps);
  std::vector<double> cost(verts.count());
  std::vector<double> coords(n);
  for (long v = 0; v < verts.count(); ++v) {
    verts.fill(static_cast<std::uint32_t>(v), coords.data());
    cost[v] = phi(coords);
  }

  EqualityLP lp;
  lp.rows = n;
  lp.cols = verts.count();
  lp.rhs.assign(n, 1.0);
  lp.column = [&verts](long j, double* out) { verts.fill(static_cast<std::uint32_t>(j), out); };
  lp.cost = [&cost](long j) { return cost[j]; };

  const SimplexSolution sim = simplex_maximize(lp);

  LPSolution sol;
  sol.objective = sim.objective;
  std::vector<double> recon(n, 0.0);
  for (const auto& [col, w] : sim.basis) {
    sol.weights.emplace_back(static_cast<std::uint32_t>(col), w);
    for (int i = 0; i < n; ++i) recon[i] += w * verts.coordinate(static_cast<std::uint32_t>(col), i);
  }
  for (int i = 0; i < n; ++i) sol.residual = std::max(sol.residual, std::abs(recon[i] - 1.0));
  return sol;
}

// LP route to the frontier: vertex program for the summed Fisher objective,
// averaged over the n(n-1) ordered pairs.
inline double avg_fisher_supremum(int n, double eps, Theta theta) {
  const LPSolution sol = lp_supremum(n, eps, fisher_pair_objective(n, theta));
  return sol.objective / (static_cast<double>(n) * (n - 1));
}

struct GroupedSolution {
  double objective = 0.0;  // same scale as lp_supremum
  int best_k = 0;
  double beta = 0.0;  // weight placed on the winning class
};

// Symmetrized form of the vertex LP: one variable per class of vertices with
// k coordinates raised, solvable by scanning k. Assumes psi(1,1) = 0.
inline GroupedSolution grouped_supremum(int n, double eps,
                                        const std::function<double(double, double)>& psi) {
  detail::require_arity(n, "grouped_supremum");
  detail::require_eps(eps, "grouped_supremum");
  const double grow = std::exp(eps);
  const double kernel_sum = psi(grow, 1.0) + psi(1.0, grow);
  GroupedSolution best;
  for (int k = 1; 2 * k <= n; ++k) {
    const double value = n * kernel_sum * group_ratio(n, k, eps);
    if (best.best_k == 0 || value > best.objective) {
      best.objective = value;
      best.best_k = k;
      best.beta = n / (k * grow + n - k);
    }
  }
  return best;
}

// The tuple achieving the classical frontier: over the alphabet of all
// vertices with exactly k raised coordinates, p_i(v) = v(i) / normalizer.
inline ClassicalTuple extremal_tuple(int n, int k, double eps) {
  detail::require_arity(n, "extremal_tuple");
  detail::require_eps(eps, "extremal_tuple");
  if (k < 1 || 2 * k > n) throw InvalidInput("extremal_tuple: k must lie in [1, n/2]");

  const double grow = std::exp(eps);
  const double normalizer = detail::binomial(n - 1, k - 1) * grow + detail::binomial(n - 1, k);
  std::vector<std::uint32_t> alphabet;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    if (std::popcount(mask) == k) alphabet.push_back(mask);

  std::vector<ProbabilityVector> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(alphabet.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      w[a] = ((alphabet[a] >> i) & 1u ? grow : 1.0) / normalizer;
    rows.emplace_back(std::move(w));
  }
  return ClassicalTuple(std::move(rows));
}

}  // namespace cqdp
