#include <catch2/catch_amalgamated.hpp>

#include "cqdp/frontier.hpp"
#include "test_support.hpp"

using namespace cqdp;

namespace {
const double kLn2 = std::log(2.0);

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Independent route to the extremal tuple's pairwise value: classify the
// alphabet letters by the pair (v(i), v(j)) and count each class.
double pair_value_by_counting(int n, int k, double eps, Theta theta) {
  const double grow = std::exp(eps);
  const double normalizer = choose(n - 1, k - 1) * grow + choose(n - 1, k);
  const double cross = choose(n - 2, k - 1);
  return cross * (fisher_kernel(theta, grow, 1.0) + fisher_kernel(theta, 1.0, grow)) / normalizer;
}

}  // namespace

TEST_CASE("classical_max_pair closed form", "[frontier]") {
  REQUIRE(classical_max_pair(kLn2, Theta(0.5)) == Catch::Approx(4.0 / 9.0).epsilon(1e-12));
  REQUIRE(classical_max_pair(kLn2, Theta(0.0)) == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE(classical_max_pair(kLn2, Theta(1.0)) == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE_THROWS_AS(classical_max_pair(0.0, Theta(0.5)), InvalidInput);

  for (double eps : {0.1, kLn2, 1.0, 3.0})
    for (double th : {0.0, 0.2, 0.5, 0.8, 1.0})
      REQUIRE(classical_max(2, eps, Theta(th)) ==
              Catch::Approx(classical_max_pair(eps, Theta(th))).epsilon(1e-12));
}

TEST_CASE("best_group_size picks the winning vertex class", "[frontier]") {
  REQUIRE(best_group_size(2, 1.0) == 1);
  REQUIRE(best_group_size(3, 0.2) == 1);
  REQUIRE(best_group_size(3, 4.0) == 1);
  REQUIRE(best_group_size(4, 0.01) == 2);

  // exhaustive check at n = 6, eps = 3
  int brute = 1;
  for (int k = 2; k <= 3; ++k)
    if (group_ratio(6, k, 3.0) > group_ratio(6, brute, 3.0)) brute = k;
  REQUIRE(best_group_size(6, 3.0) == brute);
}

TEST_CASE("classical_max closed form and monotonicity", "[frontier]") {
  REQUIRE(classical_max(3, kLn2, Theta(0.5)) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));

  // three-state value is a theta-independent multiple of the pair value
  for (double eps : {0.1, kLn2, 2.0})
    for (double th : {0.0, 0.3, 0.5, 1.0}) {
      const double ratio = (std::exp(eps) + 1.0) / (std::exp(eps) + 2.0);
      REQUIRE(classical_max(3, eps, Theta(th)) ==
              Catch::Approx(ratio * classical_max_pair(eps, Theta(th))).epsilon(1e-12));
    }

  for (double eps : {0.1, kLn2, 1.0, 2.0})
    for (double th : {0.0, 0.25, 0.5})
      for (int n = 2; n < 9; ++n)
        REQUIRE(classical_max(n + 1, eps, Theta(th)) <=
                classical_max(n, eps, Theta(th)) + 1e-12);
}

TEST_CASE("sublinear objective registration rejects bad evaluators", "[frontier]") {
  REQUIRE_NOTHROW(SublinearObjective(3, [](std::span<const double>) { return 0.0; }));
  // degree-2 homogeneous
  REQUIRE_THROWS_AS(SublinearObjective(2, [](std::span<const double> x) { return x[0] * x[1]; }),
                    InvalidInput);
  // homogeneous but superadditive
  REQUIRE_THROWS_AS(
      SublinearObjective(2, [](std::span<const double> x) { return -std::max(x[0], x[1]); }),
      InvalidInput);
}

TEST_CASE("lp_supremum on the two-state program solved by hand", "[frontier]") {
  // Objective phi(x) = f(x1,x2) + f(x2,x1) vanishes on the constant vertices,
  // so the optimum splits weight 1/(e^eps+1) on each single-raised vertex:
  // objective 2*(f(g,1)+f(1,g))/(g+1).
  for (double eps : {0.4, kLn2, 1.1}) {
    const Theta th(0.5);
    const LPSolution sol = lp_supremum(2, eps, fisher_pair_objective(2, th));
    const double g = std::exp(eps);
    const double pair_sum = fisher_kernel(th, g, 1.0) + fisher_kernel(th, 1.0, g);
    REQUIRE(sol.objective == Catch::Approx(2.0 * pair_sum / (g + 1.0)).epsilon(1e-11));
    REQUIRE(sol.residual <= 1e-8);

    REQUIRE(sol.weights.size() == 2);
    for (const auto& [mask, w] : sol.weights) {
      REQUIRE((mask == 1u || mask == 2u));
      REQUIRE(w == Catch::Approx(1.0 / (g + 1.0)).epsilon(1e-11));
    }
  }

  const SublinearObjective zero(3, [](std::span<const double>) { return 0.0; });
  REQUIRE(lp_supremum(3, 1.0, zero).objective == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("lp, grouped and closed-form frontiers agree", "[frontier]") {
  for (int n : {2, 3, 4, 5}) {
    for (double eps : {0.3, kLn2, 1.5}) {
      for (double th : {0.0, 0.25, 0.5}) {
        const Theta theta(th);
        const double closed = classical_max(n, eps, theta);
        const double via_lp = avg_fisher_supremum(n, eps, theta);
        const GroupedSolution grouped = grouped_supremum(
            n, eps, [&](double a, double b) { return fisher_kernel(theta, a, b); });
        const double via_grouped = grouped.objective / (static_cast<double>(n) * (n - 1));
        REQUIRE(via_lp == Catch::Approx(closed).margin(1e-9));
        REQUIRE(via_grouped == Catch::Approx(closed).margin(1e-12));
        REQUIRE(grouped.best_k == best_group_size(n, eps));
      }
    }
  }
}

TEST_CASE("lp solutions are basic: at most n vertices carry weight", "[frontier]") {
  for (int n : {2, 3, 4, 6}) {
    const LPSolution sol = lp_supremum(n, 0.9, fisher_pair_objective(n, Theta(0.25)));
    REQUIRE(sol.weights.size() <= static_cast<std::size_t>(n));
    for (const auto& [mask, w] : sol.weights) {
      REQUIRE(mask < (1u << n));
      REQUIRE(w >= -1e-12);
    }
  }
}

TEST_CASE("lp_supremum guards its limits", "[frontier]") {
  const SublinearObjective zero17(17, [](std::span<const double>) { return 0.0; });
  REQUIRE_THROWS_AS(lp_supremum(17, 1.0, zero17), ResourceLimit);
  const SublinearObjective zero3(3, [](std::span<const double>) { return 0.0; });
  REQUIRE_THROWS_AS(lp_supremum(4, 1.0, zero3), InvalidInput);  // arity mismatch
}

TEST_CASE("extremal_tuple reproduces the hand-built two-state pair", "[frontier]") {
  const ClassicalTuple t = extremal_tuple(2, 1, kLn2);
  REQUIRE(t.size() == 2);
  REQUIRE(t.dim() == 2);
  REQUIRE(t[0][0] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  REQUIRE(t[0][1] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(t[1][0] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(t[1][1] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));

  REQUIRE_THROWS_AS(extremal_tuple(4, 3, 1.0), InvalidInput);
  REQUIRE_THROWS_AS(extremal_tuple(3, 0, 1.0), InvalidInput);
}

TEST_CASE("extremal_tuple rows are normalized and exactly eps-private", "[frontier]") {
  for (int n : {3, 5}) {
    for (int k = 1; 2 * k <= n; ++k) {
      for (double eps : {0.2, kLn2, 2.0}) {
        const ClassicalTuple t = extremal_tuple(n, k, eps);
        REQUIRE(t.size() == n);
        for (int i = 0; i < n; ++i) {
          double sum = 0.0;
          for (int a = 0; a < t.dim(); ++a) sum += t[i][a];
          REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-13));
        }
        REQUIRE(classical_dp_check(t, eps));
        const auto observed = min_epsilon(t);
        REQUIRE(observed.has_value());
        REQUIRE(*observed == Catch::Approx(eps).margin(1e-12));
      }
    }
  }
}

TEST_CASE("extremal_tuple attains the frontier at the winning class", "[frontier]") {
  for (int n : {2, 3, 4, 5, 6}) {
    for (double eps : {0.3, kLn2, 1.2}) {
      for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Theta theta(th);
        for (int k = 1; 2 * k <= n; ++k) {
          const ClassicalTuple t = extremal_tuple(n, k, eps);
          double min_pair = std::numeric_limits<double>::infinity();
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              if (i != j) min_pair = std::min(min_pair, fisher_classical(theta, t[i], t[j]).value);
          REQUIRE(min_pair == Catch::Approx(pair_value_by_counting(n, k, eps, theta)).margin(1e-10));
        }
        const int k_best = best_group_size(n, eps);
        const ClassicalTuple best = extremal_tuple(n, k_best, eps);
        double min_pair = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j)
              min_pair = std::min(min_pair, fisher_classical(theta, best[i], best[j]).value);
        REQUIRE(min_pair == Catch::Approx(classical_max(n, eps, theta)).margin(1e-10));
      }
    }
  }
}

TEST_CASE("extremal_tuple is symmetric under relabeling states", "[frontier]") {
  const ClassicalTuple t = extremal_tuple(3, 1, 0.7);
  // swapping states 0 and 1 together with alphabet letters {0}<->{1}
  // reproduces the same weights
  REQUIRE(t[0][0] == t[1][1]);
  REQUIRE(t[0][1] == t[1][0]);
  REQUIRE(t[0][2] == t[1][2]);

  // every ordered pair carries the same fisher value
  const Theta th(0.3);
  const double first = fisher_classical(th, t[0], t[1]).value;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        REQUIRE(fisher_classical(th, t[i], t[j]).value == Catch::Approx(first).epsilon(1e-12));
}

TEST_CASE("min over pairs never exceeds the average over pairs", "[frontier]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const ClassicalTuple t = testutil::random_dp_tuple(rng, 4, 5, 1.0);
    const Theta th(trial / 20.0);
    double min_pair = std::numeric_limits<double>::infinity();
    double avg = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) {
          const double v = fisher_classical(th, t[i], t[j]).value;
          min_pair = std::min(min_pair, v);
          avg += v;
        }
    avg /= 12.0;
    REQUIRE(min_pair <= avg + 1e-12);
  }
}
