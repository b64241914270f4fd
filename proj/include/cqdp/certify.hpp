#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cqdp/dp.hpp"
#include "cqdp/errors.hpp"
#include "cqdp/fisher.hpp"
#include "cqdp/frontier.hpp"
#include "cqdp/witness.hpp"

namespace cqdp {

enum class Verdict { NotInEC, Inconclusive };

inline const char* to_string(Verdict v) {
  return v == Verdict::NotInEC ? "NOT_IN_EC" : "INCONCLUSIVE";
}

struct ThetaComparison {
  double theta = 0.0;
  double avg_fisher = 0.0;
  double classical_bound = 0.0;
  double margin = 0.0;
};

// Outcome of the non-classicality test: a tuple that is private at eps yet
// exceeds the classical frontier at some theta cannot be a channel image of
// any classical private tuple. The record keeps the whole sweep so a verdict
// can be audited.
struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  double eps = 0.0;
  int n = 0;                // size of the certified (sub)tuple
  std::vector<int> subset;  // indices into the input tuple (empty = whole tuple)
  bool dp_verified = false;
  double dp_tol = 0.0;
  double margin_tol = 0.0;
  double best_theta = 0.0;
  double avg_fisher = 0.0;
  double classical_bound = 0.0;
  double margin = -std::numeric_limits<double>::infinity();
  std::vector<ThetaComparison> per_theta;
  std::vector<double> skipped_thetas;  // singular mixture at these grid points
};

// Uniform grid on [0,1] with 1/2 forced in; the canonical witness certifies
// at theta = 1/2 but a sweep is a stronger test.
inline std::vector<double> default_theta_grid(int points = 41) {
  if (points < 2) throw InvalidInput("default_theta_grid: need at least 2 points");
  std::vector<double> grid;
  grid.reserve(points + 1);
  for (int i = 0; i < points; ++i) grid.push_back(static_cast<double>(i) / (points - 1));
  grid.push_back(0.5);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct CertifyOptions {
  std::vector<double> theta_grid = default_theta_grid();
  double margin_tol = 1e-7;  // strict inequality: numerical equality must not certify
  double dp_tol = 1e-9;
  std::vector<int> subset;  // certify this sub-tuple at its own arity; empty = all
};

// Average Fisher information over the n(n-1) ordered pairs at one theta.
inline double average_pairwise_fisher(const std::vector<const HermitianMatrix*>& states,
                                      Theta theta) {
  const int n = static_cast<int>(states.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) sum += fisher_quantum(theta, *states[i], *states[j]).value;
  return sum / (static_cast<double>(n) * (n - 1));
}

inline Certificate certify(const DensityTuple& t, double eps, const CertifyOptions& opt = {}) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("certify: eps must be > 0");
  if (!(opt.margin_tol >= 0.0)) throw InvalidInput("certify: margin_tol must be >= 0");
  if (opt.theta_grid.empty()) throw InvalidInput("certify: theta grid is empty");

  const DpReport dp = cq_dp_report(t, eps, opt.dp_tol);
  if (!dp.ok)
    throw NotDPAtEps("certify: tuple is not CQ DP at eps (worst eigenvalue " +
                     std::to_string(dp.worst_value) + " for pair " +
                     std::to_string(dp.worst_i + 1) + "," + std::to_string(dp.worst_j + 1) + ")");

  std::vector<int> subset = opt.subset;
  if (subset.empty())
    for (int i = 0; i < t.size(); ++i) subset.push_back(i);
  if (subset.size() < 2) throw InvalidInput("certify: subset needs at least 2 indices");
  std::vector<const HermitianMatrix*> states;
  states.reserve(subset.size());
  for (int idx : subset) {
    if (idx < 0 || idx >= t.size()) throw InvalidInput("certify: subset index out of range");
    states.push_back(&t[idx]);
  }

  Certificate cert;
  cert.eps = eps;
  cert.n = static_cast<int>(subset.size());
  cert.subset = std::move(subset);
  cert.dp_verified = true;
  cert.dp_tol = opt.dp_tol;
  cert.margin_tol = opt.margin_tol;

  for (double th : opt.theta_grid) {
    ThetaComparison row;
    row.theta = th;
    try {
      row.avg_fisher = average_pairwise_fisher(states, Theta(th));
    } catch (const NotPositiveDefinite&) {
      cert.skipped_thetas.push_back(th);
      continue;
    }
    row.classical_bound = classical_max(cert.n, eps, Theta(th));
    row.margin = row.avg_fisher - row.classical_bound;
    cert.per_theta.push_back(row);
    if (row.margin > cert.margin) {
      cert.margin = row.margin;
      cert.best_theta = row.theta;
      cert.avg_fisher = row.avg_fisher;
      cert.classical_bound = row.classical_bound;
    }
  }

  cert.verdict =
      cert.margin > cert.margin_tol ? Verdict::NotInEC : Verdict::Inconclusive;
  return cert;
}

// Frontier margin of the canonical three-state witness (dimension 2,
// perturbation at t_max, theta = 1/2): 4s^2/((s+2)^2(s+3)), s = e^eps - 1.
// Strictly positive for every eps > 0 and independent of the coherence.
inline double canonical_witness_margin(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("canonical_witness_margin: eps must be > 0");
  const double s = std::expm1(eps);
  return 4.0 * s * s / ((s + 2.0) * (s + 2.0) * (s + 3.0));
}

// Ratio of the three-state to the two-state classical frontier,
// (e^eps+1)/(e^eps+2); independent of theta.
inline double gap_ratio(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("gap_ratio: eps must be > 0");
  const double g = std::exp(eps);
  return (g + 1.0) / (g + 2.0);
}

// Pair Fisher information of the n-dimensional equiangular witness at t_max,
// per coherence value. As c -> 1 the values climb to the two-state classical
// frontier, which is why widening the tuple does not shrink the quantum
// supremum.
inline std::vector<std::pair<double, double>> witness_limit_sweep(
    double eps, Theta theta, int n, const std::vector<double>& c_values) {
  if (n < 2) throw InvalidInput("witness_limit_sweep: n must be >= 2");
  std::vector<std::pair<double, double>> out;
  out.reserve(c_values.size());
  for (double c : c_values) {
    const WitnessParams p = witness_params(eps, c);  // rejects c outside [0,1)
    out.emplace_back(c, witness_fisher_value(theta, n, p.t_max, c));
  }
  return out;
}

}  // namespace cqdp
