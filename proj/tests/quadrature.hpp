#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace lsweep::testing {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out;
  for (int k = 1; k <= n; ++k) {
    double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out.emplace_back(x, 2 / ((1 - x * x) * dp * dp));
  }
  return out;
}

// Composite Gauss-Legendre of f over [a, b].
template <class F>
auto integrate(F&& f, double a, double b, int panels = 64, int order = 20) {
  static const auto rule = gauss_legendre(order);
  const double w = (b - a) / panels;
  decltype(f(a)) sum{};
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * w;
    for (const auto& [x, wt] : rule) sum += f(c + 0.5 * w * x) * (0.5 * w * wt);
  }
  return sum;
}

}  // namespace lsweep::testing
