#include "coldplasma/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "coldplasma/error.hpp"

namespace coldplasma {

GaussRule1D gauss_legendre(int n) {
  if (n < 1 || n > 64) throw InvalidArgument("gauss_legendre: point count must be in [1, 64]");
  GaussRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton on P_n from the Chebyshev initial guess, then map [-1,1] -> [0,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const int j = n - 1 - i;
    rule.points[j] = 0.5 * (x + 1.0);
    rule.weights[j] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule hex_rule(int n) {
  const GaussRule1D g = gauss_legendre(n);
  QuadratureRule rule;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        rule.points.push_back({g.points[i], g.points[j], g.points[k]});
        rule.weights.push_back(g.weights[i] * g.weights[j] * g.weights[k]);
      }
  return rule;
}

QuadratureRule face_rule(int n, int axis, double side) {
  const GaussRule1D g = gauss_legendre(n);
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  QuadratureRule rule;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Vec3 p;
      p[axis] = side;
      p[a1] = g.points[i];
      p[a2] = g.points[j];
      rule.points.push_back(p);
      rule.weights.push_back(g.weights[i] * g.weights[j]);
    }
  return rule;
}

}  // namespace coldplasma
