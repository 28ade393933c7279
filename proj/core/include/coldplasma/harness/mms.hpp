#pragma once

#include <span>

#include "coldplasma/fespace.hpp"
#include "coldplasma/physics.hpp"
#include "coldplasma/semidiscrete.hpp"

namespace coldplasma::harness {

struct MmsValues {
  Vec3 E;
  Vec3 B;
  double rho = 0.0;
  Vec3 M;
};

struct MmsSources {
  Vec3 E;
  Vec3 B;
  double rho = 0.0;
  Vec3 M;
};

/// Manufactured fields on [-1,1]^3 with n x E = 0, n . B = 0, n . M = 0 on the boundary.
MmsValues mms_fields(double t, const Vec3& x, const PhysConstants& pc);

/// Source terms that make mms_fields an exact solution of
///   rho_t + div(M / gamma) = S_rho
///   M_t + div(M (x) w) - rho (e/m) (E + w x B / c) = S_M,   w = M / (rho gamma)
///   E_t - c curl B + 4 pi (e/m) M / gamma = S_E
///   B_t + c curl E = S_B
MmsSources mms_sources(double t, const Vec3& x, const PhysConstants& pc);

/// A with curl A = B(0, .) for the manufactured field (and for the
/// conservation-study field, which has the same shape); tangential trace zero.
Vec3 mms_vector_potential(const Vec3& x);

/// Sources as callbacks for the integrators.
SourceProvider mms_source_provider(const PhysConstants& pc);

/// Edge degrees of freedom int_e A . t ds with an n-point Gauss rule per edge.
DofVector edge_interpolate(const FeSpace& edge_space, const VectorFunction& a, int n = 6);

}  // namespace coldplasma::harness
