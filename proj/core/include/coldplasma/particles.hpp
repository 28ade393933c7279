#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coldplasma/fespace.hpp"
#include "coldplasma/mesh.hpp"
#include "coldplasma/physics.hpp"
#include "coldplasma/quadrature.hpp"
#include "coldplasma/sparse.hpp"

namespace coldplasma {

/// Macro-particles of the single species described by PhysConstants.
struct ParticleSet {
  std::vector<Vec3> X;  ///< positions
  std::vector<Vec3> U;  ///< momenta (m gamma v)
  std::vector<double> w;  ///< weights, constant in time
  std::vector<std::uint8_t> active;

  std::size_t size() const { return X.size(); }
  void add(const Vec3& x, const Vec3& u, double weight) {
    X.push_back(x);
    U.push_back(u);
    w.push_back(weight);
    active.push_back(1);
  }
  double active_weight() const;
};

/// Straight move split at cell faces, with the diagonal weights D_i.
struct SegmentedPath {
  std::vector<Vec3> points;  ///< A_0 = start, ..., A_s = end (unwrapped)
  std::vector<Vec3> D;       ///< diagonal of D_i for each of the s segments
  bool exits = false;        ///< path truncated where it leaves through an open face
  std::size_t segments() const { return D.size(); }
};

/// Segments x_old -> x_new (x_new unwrapped relative to x_old). D_i holds the
/// componentwise ratio (A_i - A_{i-1}) / (x_new - x_old); a component with
/// zero total displacement gets 1/s on every segment. A move leaving through
/// an open face is cut at the exit point.
SegmentedPath segment_and_build_D(const StructuredHexMesh& mesh, const Vec3& x_old, const Vec3& x_new);

/// X += dt U / (m gamma). Periodic coordinates wrap; particles leaving through
/// an open face are deactivated. Returns the weight removed by this call.
double push_position_explicit(ParticleSet& set, const StructuredHexMesh& mesh, const PhysConstants& pc, double dt);

/// U += dt e (E(X) + U x B(X) / (c m gamma)).
void push_momentum_explicit(ParticleSet& set, const FeSpace& e_space, std::span<const double> e, const FeSpace& b_space,
                            std::span<const double> b, const PhysConstants& pc, double dt);

/// Entries sum_p w_p (U_p / gamma_p) . nu_i(X_p) over the edge basis.
DofVector deposit_point_current(const ParticleSet& set, const FeSpace& edge_space, const PhysConstants& pc);

/// Entries sum_p w_p phi_i(X_p) over a scalar basis.
DofVector deposit_point_charge(const ParticleSet& set, const FeSpace& scalar_space);

/// Entries sum_p w_p sum_i (A_i - A_{i-1}) / dt . int_0^1 nu(A_{i-1} + xi (A_i - A_{i-1})) dxi.
DofVector segmented_current(const ParticleSet& set, const std::vector<SegmentedPath>& paths, const FeSpace& edge_space,
                            double dt, const GaussRule1D& xi_rule);

/// int_0^1 F(a + xi (b - a)) dxi for a vector field F of `space`, where [a, b]
/// lies in one cell of the periodic cover.
Vec3 segment_average(const FeSpace& space, std::span<const double> coeffs, const Vec3& a, const Vec3& b,
                     const GaussRule1D& xi_rule);

/// Vector field of `space` at a (possibly unwrapped) point; zero outside.
Vec3 eval_vector_at_point(const FeSpace& space, std::span<const double> coeffs, const Vec3& x);

/// Positions with density proportional to exp(-10 |x|^2) restricted to the box
/// |x_i| < cutoff, momenta uniform in [0,1]^3, equal weights.
ParticleSet sample_gaussian_ball(std::size_t n, double cutoff, std::uint64_t seed, double weight);

}  // namespace coldplasma
