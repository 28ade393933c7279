#pragma once

#include <vector>

#include "coldplasma/vec3.hpp"

namespace coldplasma {

/// One-dimensional Gauss-Legendre rule on [0, 1].
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule1D gauss_legendre(int n);

/// Tensor-product rule on the reference cube [0,1]^3 (or a face of it).
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// n^3 Gauss points on [0,1]^3.
QuadratureRule hex_rule(int n);

/// n^2 Gauss points on the reference face with coordinate `axis` fixed to
/// `side` (0 or 1). Weights sum to 1 (reference face area).
QuadratureRule face_rule(int n, int axis, double side);

}  // namespace coldplasma
