#pragma once

#include <span>
#include <string>

#include "coldplasma/discretization.hpp"
#include "coldplasma/integrators.hpp"
#include "coldplasma/particles.hpp"
#include "coldplasma/physics.hpp"

namespace coldplasma {

/// (1/m) int rho + sum of active particle weights.
double total_mass(const Discretization& disc, const FieldState& f, const ParticleSet& particles, const PhysConstants& pc);

/// int rho (gamma - 1) c^2 + sum_p w_p (gamma(U_p) - 1) m c^2 + (1/8 pi) int (E^2 + B^2).
double total_energy(const Discretization& disc, const FieldState& f, const ParticleSet& particles,
                    const PhysConstants& pc);

/// int rho phi_j over the constrained nodal basis.
DofVector density_pairing(const Discretization& disc, std::span<const double> rho);

/// Right-hand side of the weak Gauss law against the constrained nodal basis:
/// 4 pi e (int rho phi_j / m + sum_p w_p phi_j(X_p) - n0 int phi_j).
DofVector gauss_charge(const Discretization& disc, const FieldState& f, const ParticleSet& particles,
                       const PhysConstants& pc);

/// max_j |-(G^T M_N E)_j - gauss_charge_j|.
double gauss_residual(const Discretization& disc, const FieldState& f, const ParticleSet& particles,
                      const PhysConstants& pc);

/// L2 norm of the elementwise divergence of B.
double divB_norm(const Discretization& disc, std::span<const double> b);

/// Replaces E by its Gauss-clean projection for the current charge.
void clean_electric_field(const Discretization& disc, TimeState& s, const PhysConstants& pc, const CgConfig& cg);

struct ConservationReport {
  double t = 0.0;
  double total_mass = 0.0;
  double total_energy = 0.0;
  double gauss_residual_inf = 0.0;
  double divB_L2 = 0.0;
  double mass_rel_err = 0.0;    ///< (mass(t) - mass(0)) / mass(0)
  double energy_rel_err = 0.0;  ///< (H(t) - H(0)) / H(0)
  double removed_mass = 0.0;    ///< particle weight that left through open faces
};

/// Diagnostics of `s`; relative errors refer to `initial` (pass nullptr at
/// t = 0) and fall back to absolute differences when the reference is zero.
ConservationReport conservation_report(const Discretization& disc, const TimeState& s, const PhysConstants& pc,
                                       const ConservationReport* initial);

/// CSV header and row matching ConservationReport, 17 significant digits.
std::string csv_header();
std::string csv_row(const ConservationReport& r);

}  // namespace coldplasma
