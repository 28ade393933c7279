#include "coldplasma/integrators.hpp"

#include <algorithm>

namespace coldplasma {

std::string to_string(Integrator i) {
  switch (i) {
    case Integrator::Avf:
      return "avf";
    case Integrator::SspRk3:
      return "ssprk3";
    case Integrator::Euler:
      return "euler";
  }
  return "?";
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "avf") return Integrator::Avf;
  if (s == "ssprk3") return Integrator::SspRk3;
  if (s == "euler") return Integrator::Euler;
  throw InvalidArgument("unknown integrator '" + s + "' (expected avf, ssprk3 or euler)");
}

namespace {

struct Iterate {
  FieldState f;
  std::vector<Vec3> X;
  std::vector<Vec3> U;
  Closures cl;
};

DofVector blend(double a, std::span<const double> x, double b, std::span<const double> y) {
  return linear_combination(a, x, b, y);
}

double scale_of(std::span<const double> v) {
  const double s = norm_inf(v);
  return s > 0.0 ? s : 1.0;
}

double scale_of(const std::vector<Vec3>& v) {
  double s = 0.0;
  for (const Vec3& x : v) s = std::max(s, norm_inf(x));
  return s > 0.0 ? s : 1.0;
}

double diff_inf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double diff_inf(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm_inf(a[i] - b[i]));
  return m;
}

void add_scaled(DofVector& y, double a, const DofVector& x) {
  if (!x.empty()) axpy(a, x, y);
}

}  // namespace

TimeState avf_single_step(const Discretization& disc, const TimeState& s0, double dt, const PhysConstants& pc,
                          const AvfConfig& cfg, const SourceProvider& sources, int* iterations) {
  const FieldState& f0 = s0.fields;
  const ParticleSet& p0 = s0.particles;
  disc.check(f0);
  const StructuredHexMesh& mesh = disc.mesh();
  const GaussRule1D& xi = cfg.xi_rule;
  const std::size_t np = p0.size();
  const double inv_dt = 1.0 / dt;

  SourceLoads loads;
  if (sources) loads = assemble_sources(disc, sources(s0.t + 0.5 * dt));

  Iterate x0{f0, p0.X, p0.U, project_closures(disc, f0.rho, f0.M, {}, {}, pc)};

  auto map = [&](const Iterate& x) {
    Iterate next;
    try {
      next.cl = project_closures(disc, f0.rho, f0.M, x.f.rho, x.f.M, pc, &xi, &x.cl);
    } catch (const PositivityError& e) {
      throw ConvergenceError(std::string("Picard iterate lost positivity: ") + e.what(), {});
    }
    const DofVector e_half = blend(0.5, f0.E, 0.5, x.f.E);
    const DofVector b_half = blend(0.5, f0.B, 0.5, x.f.B);

    next.X = p0.X;
    next.U = p0.U;
    std::vector<SegmentedPath> paths(np);
    for (std::size_t p = 0; p < np; ++p) {
      if (!p0.active[p]) continue;
      const Vec3 v = avf_xi_average([&](const Vec3& u) { return particle_velocity(u, pc.m, pc.c); }, p0.U[p], x.U[p], xi);
      const Vec3 xn = p0.X[p] + dt * v;
      paths[p] = segment_and_build_D(mesh, p0.X[p], xn);
      const SegmentedPath& path = paths[p];
      Vec3 ef;
      for (std::size_t i = 0; i < path.segments(); ++i)
        ef += hadamard(path.D[i], segment_average(disc.electric_space(), e_half, path.points[i], path.points[i + 1], xi));
      const Vec3 bf = eval_vector_at_point(disc.magnetic_space(), b_half, p0.X[p] + 0.5 * dt * v);
      next.X[p] = xn;
      next.U[p] = p0.U[p] + dt * pc.e * (ef + cross(v, bf) / pc.c);
    }

    const DofVector rho_t = blend(1.0 - cfg.theta, f0.rho, cfg.theta, x.f.rho);
    const DofVector rho_t2 = blend(1.0 - cfg.theta2, f0.rho, cfg.theta2, x.f.rho);
    const DofVector m_half = blend(0.5, f0.M, 0.5, x.f.M);
    const DofVector m_t3 = blend(1.0 - cfg.theta3, f0.M, cfg.theta3, x.f.M);
    FluidDuals duals = assemble_fluid(disc, {rho_t, rho_t2, m_half, m_t3, next.cl.w, next.cl.K, e_half, b_half}, pc);
    const DofVector pcur = segmented_current(p0, paths, disc.electric_space(), dt, xi);
    DofVector edual = ampere_dual(disc, b_half, duals.J, pcur, pc);
    add_scaled(duals.rho, 1.0, loads.rho);
    add_scaled(duals.M, 1.0, loads.M);
    add_scaled(edual, 1.0, loads.E);

    const DofVector g_rho = blend(inv_dt, x.f.rho, -inv_dt, f0.rho);
    const DofVector g_m = blend(inv_dt, x.f.M, -inv_dt, f0.M);
    const DofVector g_e = blend(inv_dt, x.f.E, -inv_dt, f0.E);
    next.f.rho = blend(1.0, f0.rho, dt, disc.solve_rho(duals.rho, g_rho));
    next.f.M = blend(1.0, f0.M, dt, disc.solve_momentum(duals.M, g_m));
    next.f.E = blend(1.0, f0.E, dt, disc.solve_electric(edual, g_e));
    next.f.B = f0.B;
    disc.complex().ops().C.multiply_add(-dt * pc.c, e_half, next.f.B);
    if (!loads.B.empty()) axpy(dt, disc.solve_magnetic(loads.B), next.f.B);
    return next;
  };

  const double s_rho = scale_of(f0.rho), s_m = scale_of(f0.M), s_e = scale_of(f0.E), s_b = scale_of(f0.B);
  const double s_x = scale_of(p0.X), s_u = scale_of(p0.U);
  auto distance = [&](const Iterate& a, const Iterate& b) {
    double d = diff_inf(a.f.rho, b.f.rho) / s_rho;
    d = std::max(d, diff_inf(a.f.M, b.f.M) / s_m);
    d = std::max(d, diff_inf(a.f.E, b.f.E) / s_e);
    d = std::max(d, diff_inf(a.f.B, b.f.B) / s_b);
    d = std::max(d, diff_inf(a.X, b.X) / s_x);
    d = std::max(d, diff_inf(a.U, b.U) / s_u);
    return d;
  };

  Iterate x = x0;
  const PicardResult res = picard_solve(x, map, distance, cfg.picard_tol, cfg.picard_max);
  if (iterations) *iterations = res.iterations;

  TimeState out;
  out.fields = std::move(x.f);
  out.particles = p0;
  out.particles.X = std::move(x.X);
  out.particles.U = std::move(x.U);
  out.t = s0.t + dt;
  out.removed_weight = s0.removed_weight;
  finalize_particles(mesh, out);
  return out;
}

namespace {

TimeState avf_advance(const Discretization& disc, const TimeState& s, double dt, const PhysConstants& pc,
                      const AvfConfig& cfg, const SourceProvider& sources, int level, StepStats& stats) {
  try {
    int its = 0;
    TimeState out = avf_single_step(disc, s, dt, pc, cfg, sources, &its);
    stats.substeps += 1;
    stats.picard_iterations += its;
    stats.halvings = std::max(stats.halvings, level);
    stats.min_dt = stats.min_dt == 0.0 ? dt : std::min(stats.min_dt, dt);
    return out;
  } catch (const ConvergenceError&) {
    if (!cfg.adapt_dt || level >= cfg.max_halvings) throw;
  }
  const TimeState mid = avf_advance(disc, s, 0.5 * dt, pc, cfg, sources, level + 1, stats);
  return avf_advance(disc, mid, 0.5 * dt, pc, cfg, sources, level + 1, stats);
}

}  // namespace

TimeState avf_step(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                   const AvfConfig& cfg, const SourceProvider& sources, StepStats* stats) {
  if (!(dt > 0.0)) throw InvalidArgument("avf_step: dt must be positive");
  if (cfg.theta < 0.0 || cfg.theta > 1.0) throw InvalidArgument("avf_step: theta must lie in [0, 1]");
  StepStats local;
  TimeState out = avf_advance(disc, state, dt, pc, cfg, sources, 0, local);
  if (stats) *stats = local;
  return out;
}

TimeState avf_step_fluxfree(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                            const AvfConfig& cfg, const SourceProvider& sources, StepStats* stats) {
  if (disc.formulation() != Formulation::FluxFree) throw InvalidArgument("avf_step_fluxfree: discretization is dgflux");
  return avf_step(disc, state, dt, pc, cfg, sources, stats);
}

TimeState avf_step_dgflux(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                          const AvfConfig& cfg, const SourceProvider& sources, StepStats* stats) {
  if (disc.formulation() != Formulation::DgFlux) throw InvalidArgument("avf_step_dgflux: discretization is fluxfree");
  return avf_step(disc, state, dt, pc, cfg, sources, stats);
}

TimeState euler_update(const TimeState& s, const Rates& r, double dt) {
  TimeState out = s;
  axpy(dt, r.rho, out.fields.rho);
  axpy(dt, r.M, out.fields.M);
  axpy(dt, r.E, out.fields.E);
  axpy(dt, r.B, out.fields.B);
  for (std::size_t p = 0; p < out.particles.size(); ++p) {
    out.particles.X[p] += dt * r.X[p];
    out.particles.U[p] += dt * r.U[p];
  }
  out.t += dt;
  return out;
}

TimeState convex_combination(double a, const TimeState& x, double b, const TimeState& y) {
  TimeState out = x;
  out.fields.rho = linear_combination(a, x.fields.rho, b, y.fields.rho);
  out.fields.M = linear_combination(a, x.fields.M, b, y.fields.M);
  out.fields.E = linear_combination(a, x.fields.E, b, y.fields.E);
  out.fields.B = linear_combination(a, x.fields.B, b, y.fields.B);
  for (std::size_t p = 0; p < out.particles.size(); ++p) {
    out.particles.X[p] = a * x.particles.X[p] + b * y.particles.X[p];
    out.particles.U[p] = a * x.particles.U[p] + b * y.particles.U[p];
  }
  out.t = a * x.t + b * y.t;
  return out;
}

void finalize_particles(const StructuredHexMesh& mesh, TimeState& s) {
  ParticleSet& ps = s.particles;
  for (std::size_t p = 0; p < ps.size(); ++p) {
    if (!ps.active[p]) continue;
    if (!mesh.contains(ps.X[p])) {
      ps.active[p] = 0;
      s.removed_weight += ps.w[p];
      continue;
    }
    ps.X[p] = mesh.wrap(ps.X[p]);
  }
}

TimeState explicit_step(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                        Integrator kind, const SourceProvider& sources) {
  auto rhs = [&](const TimeState& s) {
    if (!sources) return semidiscrete_rhs(disc, s.fields, s.particles, pc);
    const Sources src = sources(s.t);
    return semidiscrete_rhs(disc, s.fields, s.particles, pc, &src);
  };
  TimeState out;
  if (kind == Integrator::SspRk3) out = ssprk3_step(state, dt, rhs);
  else if (kind == Integrator::Euler) out = euler_step(state, dt, rhs);
  else throw InvalidArgument("explicit_step: integrator must be ssprk3 or euler");
  finalize_particles(disc.mesh(), out);
  return out;
}

double cfl_number(const Discretization& disc, const FieldState& state, const PhysConstants& pc, double dt) {
  return dt * std::max(max_wave_speed(disc, state, pc), pc.c) / disc.mesh().min_cell_size();
}

}  // namespace coldplasma
