#include "coldplasma/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "assembly.hpp"
#include "coldplasma/solvers.hpp"

namespace coldplasma {

using detail::gather;
using detail::Local;

double total_mass(const Discretization& disc, const FieldState& f, const ParticleSet& particles, const PhysConstants& pc) {
  const DofVector mr = disc.mass_rho() * std::span<const double>(f.rho);
  double fluid = 0.0;
  for (double v : mr) fluid += v;
  return fluid / pc.m + particles.active_weight();
}

double total_energy(const Discretization& disc, const FieldState& f, const ParticleSet& particles,
                    const PhysConstants& pc) {
  const BasisTable& rt = disc.rho_table();
  const BasisTable& mt = disc.momentum_table();
  Local lr{}, lm{};
  double fluid = 0.0;
  for (std::size_t cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    gather(disc.rho_space(), cell, f.rho, lr);
    gather(disc.momentum_space(), cell, f.M, lm);
    for (int q = 0; q < rt.nq; ++q) {
      const double rho = detail::scalar_at(rt, q, lr);
      const Vec3 m = detail::vector_at(mt, q, lm);
      if (dot(m, m) == 0.0) continue;
      fluid += rt.weights[q] * fluid_energy_density(rho, m, pc.c);
    }
  }
  double kinetic = 0.0;
  for (std::size_t p = 0; p < particles.size(); ++p)
    if (particles.active[p]) kinetic += particles.w[p] * particle_energy(particles.U[p], pc.m, pc.c);
  const double ee = dot(f.E, disc.mass_electric() * std::span<const double>(f.E));
  const double bb = dot(f.B, disc.mass_magnetic() * std::span<const double>(f.B));
  return fluid + kinetic + (ee + bb) / (8.0 * std::numbers::pi);
}

DofVector density_pairing(const Discretization& disc, std::span<const double> rho) {
  const FeSpace& ps = disc.potential_space();
  const BasisTable& rt = disc.rho_table();
  const BasisTable& pt = disc.potential_table();
  DofVector out(ps.n_dofs(), 0.0);
  Local lr{}, acc{};
  for (std::size_t cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    gather(disc.rho_space(), cell, rho, lr);
    acc.fill(0.0);
    for (int q = 0; q < rt.nq; ++q) {
      const double v = rt.weights[q] * detail::scalar_at(rt, q, lr);
      const std::size_t o = static_cast<std::size_t>(q) * pt.nloc;
      for (int j = 0; j < pt.nloc; ++j) acc[j] += v * pt.value[o + j];
    }
    detail::scatter_add(ps, cell, acc, out);
  }
  return out;
}

DofVector gauss_charge(const Discretization& disc, const FieldState& f, const ParticleSet& particles,
                       const PhysConstants& pc) {
  DofVector charge = density_pairing(disc, f.rho);
  for (double& v : charge) v /= pc.m;
  axpy(1.0, deposit_point_charge(particles, disc.potential_space()), charge);
  if (pc.n0 != 0.0) {
    // Unit coefficients represent the constant 1 in both density spaces.
    const DofVector ones(disc.rho_space().n_dofs(), 1.0);
    axpy(-pc.n0, density_pairing(disc, ones), charge);
  }
  const double s = 4.0 * std::numbers::pi * pc.e;
  for (double& v : charge) v *= s;
  return charge;
}

double gauss_residual(const Discretization& disc, const FieldState& f, const ParticleSet& particles,
                      const PhysConstants& pc) {
  const SparseMatrix& g = disc.complex().ops().G;
  const DofVector me = disc.mass_electric() * std::span<const double>(f.E);
  DofVector r = gauss_charge(disc, f, particles, pc);
  for (double& v : r) v = -v;
  g.multiply_transpose_add(-1.0, me, r);
  return norm_inf(r);
}

double divB_norm(const Discretization& disc, std::span<const double> b) {
  const DofVector d = disc.complex().ops().D * b;
  const double s = dot(d, disc.complex().mass_broken() * std::span<const double>(d));
  return std::sqrt(std::fmax(s, 0.0));
}

void clean_electric_field(const Discretization& disc, TimeState& s, const PhysConstants& pc, const CgConfig& cg) {
  const DeRhamComplex& cx = disc.complex();
  const DofVector f = gauss_charge(disc, s.fields, s.particles, pc);
  s.fields.E = gauss_clean(cx.ops().G, cx.mass_edge(), cx.stiffness(), s.fields.E, f, cg).field;
}

ConservationReport conservation_report(const Discretization& disc, const TimeState& s, const PhysConstants& pc,
                                       const ConservationReport* initial) {
  ConservationReport r;
  r.t = s.t;
  r.total_mass = total_mass(disc, s.fields, s.particles, pc);
  r.total_energy = total_energy(disc, s.fields, s.particles, pc);
  r.gauss_residual_inf = gauss_residual(disc, s.fields, s.particles, pc);
  r.divB_L2 = divB_norm(disc, s.fields.B);
  r.removed_mass = s.removed_weight;
  const ConservationReport& base = initial ? *initial : r;
  const auto rel = [](double now, double then) { return then != 0.0 ? (now - then) / then : now - then; };
  r.mass_rel_err = rel(r.total_mass, base.total_mass);
  r.energy_rel_err = rel(r.total_energy, base.total_energy);
  return r;
}

std::string csv_header() { return "t,mass_rel_err,energy_rel_err,gauss_inf,divB_L2,removed_mass"; }

std::string csv_row(const ConservationReport& r) {
  std::ostringstream os;
  os << std::setprecision(17) << r.t << ',' << r.mass_rel_err << ',' << r.energy_rel_err << ','
     << r.gauss_residual_inf << ',' << r.divB_L2 << ',' << r.removed_mass;
  return os.str();
}

}  // namespace coldplasma
