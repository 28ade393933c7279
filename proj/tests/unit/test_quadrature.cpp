#include <doctest.h>

#include <cmath>

#include "coldplasma/quadrature.hpp"

using namespace coldplasma;

TEST_CASE("Gauss-Legendre on [0,1] integrates x^p exactly up to p = 2n - 1") {
  for (int n = 1; n <= 8; ++n) {
    const GaussRule1D r = gauss_legendre(n);
    REQUIRE(r.points.size() == static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += r.weights[q] * std::pow(r.points[q], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
    }
    double s = 0.0;
    for (int q = 0; q < n; ++q) s += r.weights[q] * std::pow(r.points[q], 2 * n);
    CHECK(std::fabs(s - 1.0 / (2 * n + 1)) > 1e-12);
  }
}

TEST_CASE("tensor rules have unit total weight") {
  const QuadratureRule h = hex_rule(3);
  double s = 0.0;
  for (double w : h.weights) s += w;
  CHECK(h.size() == 27);
  CHECK(s == doctest::Approx(1.0));
  for (int axis = 0; axis < 3; ++axis) {
    const QuadratureRule f = face_rule(2, axis, 1.0);
    double sf = 0.0;
    for (std::size_t q = 0; q < f.size(); ++q) {
      sf += f.weights[q];
      CHECK(f.points[q][axis] == 1.0);
    }
    CHECK(sf == doctest::Approx(1.0));
  }
}
