// Tabulates the classical frontier by three independent routes: the closed
// form, the vertex linear program, and the grouped fast path.

#include <cstdio>

#include "cqdp/cqdp.hpp"

int main() {
  const double eps = std::log(2.0);
  std::printf("eps = ln 2\n");
  std::printf("%3s %6s %14s %14s %14s\n", "n", "theta", "closed", "lp", "grouped");
  for (int n = 2; n <= 6; ++n) {
    for (double th : {0.0, 0.5}) {
      const cqdp::Theta theta(th);
      const double closed = cqdp::classical_max(n, eps, theta);
      const double lp = cqdp::avg_fisher_supremum(n, eps, theta);
      const cqdp::GroupedSolution grouped = cqdp::grouped_supremum(
          n, eps, [&](double a, double b) { return cqdp::fisher_kernel(theta, a, b); });
      std::printf("%3d %6.2f %14.10f %14.10f %14.10f\n", n, th, closed, lp,
                  grouped.objective / (static_cast<double>(n) * (n - 1)));
    }
  }
  return 0;
}
