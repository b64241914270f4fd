#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cqdp/errors.hpp"
#include "cqdp/hermitian.hpp"

namespace cqdp {

// Eigenvalues (or probability weights) at or below this are treated as zero
// when comparing supports.
inline constexpr double kSupportCutoff = 1e-11;

class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw InvalidInput("ProbabilityVector: dim must be >= 1");
    double sum = 0.0;
    for (double& x : w_) {
      if (!std::isfinite(x)) throw InvalidInput("ProbabilityVector: non-finite weight");
      if (x < 0.0) {
        if (x < -1e-12) throw InvalidInput("ProbabilityVector: negative weight");
        x = 0.0;  // drift from exact arithmetic, not a sign error
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw InvalidInput("ProbabilityVector: weights sum to " + std::to_string(sum));
  }

  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int k) const { return w_[k]; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::vector<double> w_;
};

class ClassicalTuple {
 public:
  explicit ClassicalTuple(std::vector<ProbabilityVector> rows) : rows_(std::move(rows)) {
    if (rows_.size() < 2) throw InvalidInput("ClassicalTuple: need at least 2 vectors");
    for (const auto& r : rows_)
      if (r.dim() != rows_.front().dim())
        throw InvalidInput("ClassicalTuple: mixed alphabet dimensions");
  }

  int size() const { return static_cast<int>(rows_.size()); }
  int dim() const { return rows_.front().dim(); }
  const ProbabilityVector& operator[](int i) const { return rows_[i]; }

 private:
  std::vector<ProbabilityVector> rows_;
};

class DensityTuple {
 public:
  explicit DensityTuple(std::vector<HermitianMatrix> states, double psd_tol = 1e-9,
                        double trace_tol = 1e-10)
      : states_(std::move(states)) {
    if (states_.size() < 2) throw InvalidInput("DensityTuple: need at least 2 states");
    for (const auto& s : states_) {
      if (s.dim() != states_.front().dim())
        throw InvalidInput("DensityTuple: mixed state dimensions");
      if (std::abs(s.trace() - 1.0) > trace_tol)
        throw InvalidInput("DensityTuple: state trace " + std::to_string(s.trace()) + " != 1");
      if (!is_psd(s, psd_tol)) throw InvalidInput("DensityTuple: state is not positive semi-definite");
    }
  }

  int size() const { return static_cast<int>(states_.size()); }
  int dim() const { return states_.front().dim(); }
  const HermitianMatrix& operator[](int i) const { return states_[i]; }

 private:
  std::vector<HermitianMatrix> states_;
};

inline HermitianMatrix diag_embedding(const ProbabilityVector& p) {
  return HermitianMatrix::diagonal(p.weights());
}

inline DensityTuple diag_embedding(const ClassicalTuple& t) {
  std::vector<HermitianMatrix> states;
  states.reserve(t.size());
  for (int i = 0; i < t.size(); ++i) states.push_back(diag_embedding(t[i]));
  return DensityTuple(std::move(states));
}

// Verdict plus the most negative eigenvalue (or entry) seen, and the ordered
// pair (i,j) of e^eps * state_j - state_i where it occurred.
struct DpReport {
  bool ok = true;
  double worst_value = std::numeric_limits<double>::infinity();
  int worst_i = -1;
  int worst_j = -1;
};

inline DpReport classical_dp_report(const ClassicalTuple& t, double eps, double tol = 1e-9) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("classical_dp_report: eps must be > 0");
  if (!(tol >= 0.0)) throw InvalidInput("classical_dp_report: tol must be >= 0");
  const double grow = std::exp(eps);
  DpReport rep;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j) {
      if (i == j) continue;
      for (int k = 0; k < t.dim(); ++k) {
        const double slack = grow * t[j][k] - t[i][k];
        if (slack < rep.worst_value) {
          rep.worst_value = slack;
          rep.worst_i = i;
          rep.worst_j = j;
        }
      }
    }
  rep.ok = rep.worst_value >= -tol;
  return rep;
}

inline bool classical_dp_check(const ClassicalTuple& t, double eps, double tol = 1e-9) {
  return classical_dp_report(t, eps, tol).ok;
}

inline DpReport cq_dp_report(const DensityTuple& t, double eps, double tol = 1e-9) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("cq_dp_report: eps must be > 0");
  if (!(tol >= 0.0)) throw InvalidInput("cq_dp_report: tol must be >= 0");
  const double grow = std::exp(eps);
  DpReport rep;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j) {
      if (i == j) continue;
      const double lam = min_eigenvalue(grow * t[j] - t[i]);
      if (lam < rep.worst_value) {
        rep.worst_value = lam;
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  rep.ok = rep.worst_value >= -tol;
  return rep;
}

inline bool cq_dp_check(const DensityTuple& t, double eps, double tol = 1e-9) {
  return cq_dp_report(t, eps, tol).ok;
}

// Smallest eps at which the tuple is classically DP, or nullopt when the
// supports differ and no finite eps exists.
inline std::optional<double> min_epsilon(const ClassicalTuple& t) {
  const int n = t.size();
  const int m = t.dim();
  for (int k = 0; k < m; ++k)
    for (int i = 1; i < n; ++i) {
      const bool a = t[0][k] > kSupportCutoff;
      const bool b = t[i][k] > kSupportCutoff;
      if (a != b) return std::nullopt;
    }
  double eps = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < m; ++k)
        if (t[i][k] > kSupportCutoff) eps = std::max(eps, std::log(t[i][k] / t[j][k]));
    }
  return eps;
}

// Smallest eps at which the tuple is CQ DP: the largest log-eigenvalue of the
// symmetric conjugations state_j^{-1/2} state_i state_j^{-1/2}. Supports are
// compared by rank and projector residual first; a mismatch means no finite
// eps exists.
inline std::optional<double> min_epsilon(const DensityTuple& t) {
  const int n = t.size();
  std::vector<EigenDecomposition> decs;
  decs.reserve(n);
  for (int i = 0; i < n; ++i) decs.push_back(eigh(t[i]));

  const int rank0 = rank_with_cutoff(decs[0], kSupportCutoff);
  for (int i = 1; i < n; ++i)
    if (rank_with_cutoff(decs[i], kSupportCutoff) != rank0) return std::nullopt;

  double eps = 0.0;
  for (int j = 0; j < n; ++j) {
    const ComplexMatrix projector =
        spectral_map(decs[j], [](double lam) { return lam > kSupportCutoff ? 1.0 : 0.0; })
            .to_matrix();
    const ComplexMatrix inv_sqrt =
        spectral_map(decs[j],
                     [](double lam) { return lam > kSupportCutoff ? 1.0 / std::sqrt(lam) : 0.0; })
            .to_matrix();
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      // leakage of state_i outside the support of state_j
      const ComplexMatrix inside = projector * t[i].to_matrix() * projector;
      double residual = 0.0;
      for (int r = 0; r < t.dim(); ++r)
        for (int c = 0; c < t.dim(); ++c)
          residual = std::max(residual, std::abs(t[i](r, c) - inside(r, c)));
      if (residual > 1e-8) return std::nullopt;
      const ComplexMatrix conj = inv_sqrt * t[i].to_matrix() * inv_sqrt;
      eps = std::max(eps, std::log(max_eigenvalue(HermitianMatrix(conj.rows(), conj.entries()))));
    }
  }
  return std::max(eps, 0.0);
}

}  // namespace cqdp
