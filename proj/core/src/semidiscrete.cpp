#include "coldplasma/semidiscrete.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "assembly.hpp"
#include "coldplasma/error.hpp"

namespace coldplasma {

using detail::gather;
using detail::Local;

namespace {

void check_density(double rho, std::size_t cell) {
  if (rho > kRhoFloor) return;
  std::ostringstream msg;
  msg << "density " << rho << " at or below the floor " << kRhoFloor << " in cell " << cell;
  throw PositivityError(msg.str(), cell, rho);
}

Vec3 unit(int d) {
  Vec3 e;
  e[d] = 1.0;
  return e;
}

Vec3 upwind(const Vec3& a, const Vec3& b, double mn) {
  return {upwind_flux(a.x, b.x, mn), upwind_flux(a.y, b.y, mn), upwind_flux(a.z, b.z, mn)};
}

void add_to(DofVector& y, const DofVector& x) {
  if (x.empty()) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i];
}

}  // namespace

double upwind_flux(double g1, double g2, double mn) {
  if (mn > 0.0) return g1;
  if (mn < 0.0) return g2;
  return 0.5 * (g1 + g2);
}

Closures project_closures(const Discretization& disc, std::span<const double> rho0, std::span<const double> m0,
                          std::span<const double> rho1, std::span<const double> m1, const PhysConstants& pc,
                          const GaussRule1D* xi_rule, const Closures* guess) {
  const FeSpace& rs = disc.rho_space();
  const FeSpace& ms = disc.momentum_space();
  const BasisTable& rt = disc.rho_table();
  const BasisTable& mt = disc.momentum_table();
  DofVector bw(ms.n_dofs(), 0.0);
  DofVector bk(rs.n_dofs(), 0.0);
  Local r0{}, r1{}, u0{}, u1{}, lw{}, lk{};
  for (std::size_t cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    gather(rs, cell, rho0, r0);
    gather(ms, cell, m0, u0);
    if (xi_rule) {
      gather(rs, cell, rho1, r1);
      gather(ms, cell, m1, u1);
    }
    lw.fill(0.0);
    lk.fill(0.0);
    for (int q = 0; q < rt.nq; ++q) {
      const double ra = detail::scalar_at(rt, q, r0);
      const Vec3 ma = detail::vector_at(mt, q, u0);
      check_density(ra, cell);
      Vec3 wq;
      double kq = 0.0;
      if (!xi_rule) {
        wq = fluid_velocity(ra, ma, pc.c);
        kq = kinetic_bracket(ra, ma, pc.c);
      } else {
        const double rb = detail::scalar_at(rt, q, r1);
        const Vec3 mb = detail::vector_at(mt, q, u1);
        check_density(rb, cell);
        for (std::size_t x = 0; x < xi_rule->points.size(); ++x) {
          const double xi = xi_rule->points[x];
          const double r = (1.0 - xi) * ra + xi * rb;
          const Vec3 m = (1.0 - xi) * ma + xi * mb;
          wq += xi_rule->weights[x] * fluid_velocity(r, m, pc.c);
          kq += xi_rule->weights[x] * kinetic_bracket(r, m, pc.c);
        }
      }
      const double wt = rt.weights[q];
      const Vec3* mu = mt.vvalue.data() + static_cast<std::size_t>(q) * mt.nloc;
      const double* phi = rt.value.data() + static_cast<std::size_t>(q) * rt.nloc;
      for (int b = 0; b < mt.nloc; ++b) lw[b] += wt * dot(wq, mu[b]);
      for (int a = 0; a < rt.nloc; ++a) lk[a] += wt * kq * phi[a];
    }
    detail::scatter_add(ms, cell, lw, bw);
    detail::scatter_add(rs, cell, lk, bk);
  }
  Closures out;
  out.w = disc.solve_momentum(bw, guess ? std::span<const double>(guess->w) : std::span<const double>{});
  out.K = disc.solve_rho(bk, guess ? std::span<const double>(guess->K) : std::span<const double>{});
  return out;
}

DofVector velocity_projection(const Discretization& disc, const FieldState& state, const PhysConstants& pc) {
  return project_closures(disc, state.rho, state.M, {}, {}, pc).w;
}

DofVector kinetic_potential_projection(const Discretization& disc, const FieldState& state, const PhysConstants& pc) {
  return project_closures(disc, state.rho, state.M, {}, {}, pc).K;
}

FluidDuals assemble_fluid(const Discretization& disc, const FluidOperands& ops, const PhysConstants& pc) {
  const FeSpace& rs = disc.rho_space();
  const FeSpace& ms = disc.momentum_space();
  const FeSpace& es = disc.electric_space();
  const FeSpace& bs = disc.magnetic_space();
  const BasisTable& rt = disc.rho_table();
  const BasisTable& mt = disc.momentum_table();
  const BasisTable& et = disc.electric_table();
  const BasisTable& bt = disc.magnetic_table();
  const double c2 = pc.c * pc.c;
  const double em = pc.e / pc.m;

  FluidDuals out{DofVector(rs.n_dofs(), 0.0), DofVector(ms.n_dofs(), 0.0), DofVector(es.n_dofs(), 0.0)};
  Local lr{}, lm{}, lw{}, lk{}, le{}, lb{};
  Local orho{}, omom{}, ocur{};
  for (std::size_t cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    gather(rs, cell, ops.rho, lr);
    gather(ms, cell, ops.M, lm);
    gather(ms, cell, ops.w, lw);
    gather(rs, cell, ops.K, lk);
    gather(es, cell, ops.E, le);
    gather(bs, cell, ops.B, lb);
    orho.fill(0.0);
    omom.fill(0.0);
    ocur.fill(0.0);
    for (int q = 0; q < rt.nq; ++q) {
      const double wt = rt.weights[q];
      const double rho = detail::scalar_at(rt, q, lr);
      const Vec3 m = detail::vector_at(mt, q, lm);
      const Vec3 w = detail::vector_at(mt, q, lw);
      const Mat3 jw = detail::jacobian_at(mt, q, lw);
      const Vec3 gk = detail::gradient_at(rt, q, lk);
      const Vec3 e = detail::vector_at(et, q, le);
      const Vec3 b = detail::vector_at(bt, q, lb);
      const Vec3 rw = rho * w;
      const Vec3 force = c2 * rho * gk;
      const Vec3 lorentz = em * rho * (e + cross(w, b) / pc.c);

      const std::size_t ro = static_cast<std::size_t>(q) * rt.nloc;
      for (int a = 0; a < rt.nloc; ++a) orho[a] += wt * dot(rw, rt.grad[ro + a]);

      const std::size_t mo = static_cast<std::size_t>(q) * mt.nloc;
      for (int i = 0; i < mt.nloc; ++i) {
        const Vec3& mu = mt.vvalue[mo + i];
        const Mat3& jmu = mt.jac[mo + i];
        omom[i] += wt * (dot(jmu * w, m) - dot(jw * mu, m) - dot(force, mu) + dot(lorentz, mu));
      }

      const std::size_t eo = static_cast<std::size_t>(q) * et.nloc;
      for (int i = 0; i < et.nloc; ++i) ocur[i] += wt * dot(rw, et.vvalue[eo + i]);
    }
    detail::scatter_add(rs, cell, orho, out.rho);
    detail::scatter_add(ms, cell, omom, out.M);
    detail::scatter_add(es, cell, ocur, out.J);
  }

  if (disc.formulation() != Formulation::DgFlux) return out;

  Local r1{}, r2{}, w1{}, w2{}, m1{}, m2{}, k1{}, k2{};
  Local fr1{}, fr2{}, fm1{}, fm2{};
  for (const Face& f : disc.mesh().interior_faces()) {
    const int d = f.axis;
    const BasisTable& rt1 = disc.rho_face_table(d, 0);
    const BasisTable& rt2 = disc.rho_face_table(d, 1);
    const BasisTable& mt1 = disc.momentum_face_table(d, 0);
    const BasisTable& mt2 = disc.momentum_face_table(d, 1);
    gather(rs, f.minus, ops.rho_face, r1);
    gather(rs, f.plus, ops.rho_face, r2);
    gather(ms, f.minus, ops.w, w1);
    gather(ms, f.plus, ops.w, w2);
    gather(ms, f.minus, ops.M_face, m1);
    gather(ms, f.plus, ops.M_face, m2);
    gather(rs, f.minus, ops.K, k1);
    gather(rs, f.plus, ops.K, k2);
    fr1.fill(0.0);
    fr2.fill(0.0);
    fm1.fill(0.0);
    fm2.fill(0.0);
    const Vec3 n = unit(d);
    for (int q = 0; q < rt1.nq; ++q) {
      const double wt = rt1.weights[q];
      const double rho1 = detail::scalar_at(rt1, q, r1);
      const double rho2 = detail::scalar_at(rt2, q, r2);
      const Vec3 vel1 = detail::vector_at(mt1, q, w1);
      const Vec3 vel2 = detail::vector_at(mt2, q, w2);
      const Vec3 mom1 = detail::vector_at(mt1, q, m1);
      const Vec3 mom2 = detail::vector_at(mt2, q, m2);
      const double mn = 0.5 * (mom1[d] + mom2[d]);
      const double jump_k = c2 * (detail::scalar_at(rt1, q, k1) - detail::scalar_at(rt2, q, k2));
      const double flux_rho = upwind_flux(rho1 * vel1[d], rho2 * vel2[d], mn);
      const Vec3 nxm = upwind(cross(n, mom1), cross(n, mom2), mn);

      const std::size_t ro = static_cast<std::size_t>(q) * rt1.nloc;
      for (int a = 0; a < rt1.nloc; ++a) {
        fr1[a] -= wt * flux_rho * rt1.value[ro + a];
        fr2[a] += wt * flux_rho * rt2.value[ro + a];
      }
      const std::size_t mo = static_cast<std::size_t>(q) * mt1.nloc;
      for (int i = 0; i < mt1.nloc; ++i) {
        const Vec3& mu1 = mt1.vvalue[mo + i];
        const Vec3& mu2 = mt2.vvalue[mo + i];
        fm1[i] += wt * (dot(nxm, cross(mu1, vel1)) + jump_k * upwind_flux(rho1 * mu1[d], 0.0, mn));
        fm2[i] += wt * (-dot(nxm, cross(mu2, vel2)) + jump_k * upwind_flux(0.0, rho2 * mu2[d], mn));
      }
    }
    detail::scatter_add(rs, f.minus, fr1, out.rho);
    detail::scatter_add(rs, f.plus, fr2, out.rho);
    detail::scatter_add(ms, f.minus, fm1, out.M);
    detail::scatter_add(ms, f.plus, fm2, out.M);
  }
  return out;
}

DofVector ampere_dual(const Discretization& disc, std::span<const double> b, std::span<const double> fluid_current,
                      std::span<const double> particle_current, const PhysConstants& pc) {
  const SparseMatrix& curl = disc.complex().ops().C;
  const DofVector mb = disc.mass_magnetic() * b;
  DofVector out(disc.electric_space().n_dofs(), 0.0);
  curl.multiply_transpose_add(pc.c, mb, out);
  const double four_pi_e = 4.0 * std::numbers::pi * pc.e;
  if (!fluid_current.empty()) axpy(-four_pi_e / pc.m, fluid_current, out);
  if (!particle_current.empty()) axpy(-four_pi_e, particle_current, out);
  return out;
}

SourceLoads assemble_sources(const Discretization& disc, const Sources& sources) {
  SourceLoads out;
  if (sources.rho) out.rho = assemble_load(disc.rho_space(), sources.rho);
  if (sources.M) out.M = assemble_load(disc.momentum_space(), sources.M);
  if (sources.E) out.E = assemble_load(disc.electric_space(), sources.E);
  if (sources.B) out.B = assemble_load(disc.magnetic_space(), sources.B);
  return out;
}

namespace {

Rates assemble_rates(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                     const PhysConstants& pc, const Sources* sources) {
  disc.check(state);
  const Closures cl = project_closures(disc, state.rho, state.M, {}, {}, pc);
  FluidDuals duals = assemble_fluid(disc, {state.rho, state.rho, state.M, state.M, cl.w, cl.K, state.E, state.B}, pc);

  DofVector pcur = deposit_point_current(particles, disc.electric_space(), pc);
  for (double& v : pcur) v /= pc.m;
  DofVector edual = ampere_dual(disc, state.B, duals.J, pcur, pc);

  SourceLoads loads;
  if (sources) loads = assemble_sources(disc, *sources);
  add_to(duals.rho, loads.rho);
  add_to(duals.M, loads.M);
  add_to(edual, loads.E);

  Rates r;
  r.rho = disc.solve_rho(duals.rho);
  r.M = disc.solve_momentum(duals.M);
  r.E = disc.solve_electric(edual);
  r.B.assign(disc.magnetic_space().n_dofs(), 0.0);
  disc.complex().ops().C.multiply_add(-pc.c, state.E, r.B);
  if (!loads.B.empty()) add_to(r.B, disc.solve_magnetic(loads.B));

  const std::size_t np = particles.size();
  r.X.assign(np, Vec3{});
  r.U.assign(np, Vec3{});
  for (std::size_t p = 0; p < np; ++p) {
    if (!particles.active[p]) continue;
    const Vec3& u = particles.U[p];
    const double g = gamma(u, pc.m, pc.c);
    const Vec3 ef = eval_vector_at_point(disc.electric_space(), state.E, particles.X[p]);
    const Vec3 bf = eval_vector_at_point(disc.magnetic_space(), state.B, particles.X[p]);
    r.X[p] = u / (pc.m * g);
    r.U[p] = pc.e * (ef + cross(u, bf) / (pc.c * pc.m * g));
  }
  return r;
}

}  // namespace

Rates fluxfree_rhs(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                   const PhysConstants& pc, const Sources* sources) {
  if (disc.formulation() != Formulation::FluxFree) throw InvalidArgument("fluxfree_rhs: discretization is dgflux");
  return assemble_rates(disc, state, particles, pc, sources);
}

Rates dgflux_rhs(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                 const PhysConstants& pc, const Sources* sources) {
  if (disc.formulation() != Formulation::DgFlux) throw InvalidArgument("dgflux_rhs: discretization is fluxfree");
  return assemble_rates(disc, state, particles, pc, sources);
}

Rates semidiscrete_rhs(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                       const PhysConstants& pc, const Sources* sources) {
  return assemble_rates(disc, state, particles, pc, sources);
}

double max_wave_speed(const Discretization& disc, const FieldState& state, const PhysConstants& pc) {
  const BasisTable& rt = disc.rho_table();
  const BasisTable& mt = disc.momentum_table();
  Local lr{}, lm{};
  double vmax = 0.0;
  for (std::size_t cell = 0; cell < disc.mesh().num_cells(); ++cell) {
    gather(disc.rho_space(), cell, state.rho, lr);
    gather(disc.momentum_space(), cell, state.M, lm);
    for (int q = 0; q < rt.nq; ++q) {
      const double rho = detail::scalar_at(rt, q, lr);
      check_density(rho, cell);
      vmax = std::fmax(vmax, norm_inf(fluid_velocity(rho, detail::vector_at(mt, q, lm), pc.c)));
    }
  }
  return vmax;
}

double energy_rate(const Discretization& disc, const FieldState& state, const ParticleSet& particles,
                   const PhysConstants& pc, const Rates& rates) {
  const Closures cl = project_closures(disc, state.rho, state.M, {}, {}, pc);
  const double inv4pi = 0.25 / std::numbers::pi;
  double rate = pc.c * pc.c * dot(rates.rho, disc.mass_rho() * std::span<const double>(cl.K));
  rate += dot(rates.M, disc.mass_momentum() * std::span<const double>(cl.w));
  rate += inv4pi * dot(rates.E, disc.mass_electric() * std::span<const double>(state.E));
  rate += inv4pi * dot(rates.B, disc.mass_magnetic() * std::span<const double>(state.B));
  for (std::size_t p = 0; p < particles.size(); ++p)
    if (particles.active[p]) rate += particles.w[p] * dot(particle_velocity(particles.U[p], pc.m, pc.c), rates.U[p]);
  return rate;
}

}  // namespace coldplasma
