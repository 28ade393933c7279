#pragma once

#include <functional>
#include <span>
#include <vector>

#include "coldplasma/discretization.hpp"
#include "coldplasma/particles.hpp"
#include "coldplasma/physics.hpp"
#include "coldplasma/quadrature.hpp"

namespace coldplasma {

/// Time derivatives of every unknown. Inactive particles have zero rates.
struct Rates {
  DofVector rho;
  DofVector M;
  DofVector E;
  DofVector B;
  std::vector<Vec3> X;
  std::vector<Vec3> U;
};

/// Strong-form source densities at a fixed time; empty members are skipped.
struct Sources {
  ScalarFunction rho;
  VectorFunction M;
  VectorFunction E;
  VectorFunction B;
};
using SourceProvider = std::function<Sources(double t)>;

/// Sources tested against each basis; absent sources give empty vectors.
struct SourceLoads {
  DofVector rho;
  DofVector M;
  DofVector E;
  DofVector B;
};
SourceLoads assemble_sources(const Discretization& disc, const Sources& sources);

/// Projected closures shared by all equations of one right-hand side.
struct Closures {
  DofVector w;  ///< velocity M / (rho gamma), in the momentum space
  DofVector K;  ///< kinetic bracket 1/gamma - 1, in the density space (no c^2)
};

/// Projects the closures evaluated on the path (rho0, M0) -> (rho1, M1),
/// averaged in xi with `xi_rule`. Without a rule only the first state is used.
/// Throws PositivityError naming the first cell with rho <= kRhoFloor.
Closures project_closures(const Discretization& disc, std::span<const double> rho0, std::span<const double> m0,
                          std::span<const double> rho1, std::span<const double> m1, const PhysConstants& pc,
                          const GaussRule1D* xi_rule = nullptr, const Closures* guess = nullptr);

DofVector velocity_projection(const Discretization& disc, const FieldState& state, const PhysConstants& pc);
DofVector kinetic_potential_projection(const Discretization& disc, const FieldState& state, const PhysConstants& pc);

/// Coefficient vectors entering the fluid terms. For the semi-discrete system
/// all densities and momenta are the current state; the implicit scheme passes
/// the theta-averaged and midpoint states.
struct FluidOperands {
  std::span<const double> rho;       ///< density in volume terms
  std::span<const double> rho_face;  ///< density in face fluxes
  std::span<const double> M;         ///< momentum in the advection term
  std::span<const double> M_face;    ///< momentum in the (n x M)* flux and the upwind sign
  std::span<const double> w;
  std::span<const double> K;
  std::span<const double> E;
  std::span<const double> B;
};

/// Assembled right-hand sides before the mass solves.
struct FluidDuals {
  DofVector rho;  ///< tested against the density basis
  DofVector M;    ///< tested against the momentum basis
  DofVector J;    ///< int rho w . nu over the electric basis
};

/// Volume terms of both formulations plus, for DgFlux, the upwind face terms.
FluidDuals assemble_fluid(const Discretization& disc, const FluidOperands& ops, const PhysConstants& pc);

/// Electric right-hand side c C^T M_RT B - 4 pi e (J / m + P), where P holds
/// sum_p w_p (particle velocity) . nu_i; either current may be empty.
DofVector ampere_dual(const Discretization& disc, std::span<const double> b, std::span<const double> fluid_current,
                      std::span<const double> particle_current, const PhysConstants& pc);

/// Upwind value: side 1 for mn > 0, side 2 for mn < 0, the average at mn = 0.
double upwind_flux(double g1, double g2, double mn);

Rates fluxfree_rhs(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                   const PhysConstants& pc, const Sources* sources = nullptr);
Rates dgflux_rhs(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                 const PhysConstants& pc, const Sources* sources = nullptr);
/// Dispatches on the formulation of `disc`.
Rates semidiscrete_rhs(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                       const PhysConstants& pc, const Sources* sources = nullptr);

/// Largest |M_i / (rho gamma)| over volume quadrature points.
double max_wave_speed(const Discretization& disc, const FieldState& state, const PhysConstants& pc);

/// dH/dt by the chain rule: rho' against c^2 K, M' against w, fields against
/// E / 4 pi and B / 4 pi, particle momenta against their velocities.
double energy_rate(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                   const PhysConstants& pc, const Rates& rates);

}  // namespace coldplasma
