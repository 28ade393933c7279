#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "coldplasma/discretization.hpp"
#include "coldplasma/error.hpp"
#include "coldplasma/particles.hpp"
#include "coldplasma/physics.hpp"
#include "coldplasma/quadrature.hpp"
#include "coldplasma/semidiscrete.hpp"

namespace coldplasma {

enum class Integrator { Avf, SspRk3, Euler };

std::string to_string(Integrator i);
Integrator integrator_from_string(const std::string& s);

/// Settings of the implicit average-vector-field step. Averages follow
/// u^theta = (1 - theta) u_old + theta u_new, and xi = 0 is the old state.
struct AvfConfig {
  double theta = 0.5;   ///< density in volume terms
  double theta2 = 0.5;  ///< density in face fluxes
  double theta3 = 0.5;  ///< momentum in the (n x M)* flux
  GaussRule1D xi_rule = gauss_legendre(4);
  double picard_tol = 1e-10;  ///< on the scaled increment infinity-norm
  int picard_max = 100;
  bool adapt_dt = true;
  int max_halvings = 6;
};

struct TimeState {
  FieldState fields;
  ParticleSet particles;
  double t = 0.0;
  double removed_weight = 0.0;  ///< particle weight lost through open faces so far
};

struct StepStats {
  int substeps = 0;
  int picard_iterations = 0;  ///< summed over substeps
  int halvings = 0;           ///< deepest halving level reached
  double min_dt = 0.0;
};

/// sum_q omega_q f((1 - xi_q) u_old + xi_q u_new).
template <class T, class F>
auto avf_xi_average(F&& f, const T& u_old, const T& u_new, const GaussRule1D& rule) {
  using R = decltype(f(u_old));
  R sum{};
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double xi = rule.points[q];
    sum += rule.weights[q] * f((1.0 - xi) * u_old + xi * u_new);
  }
  return sum;
}

struct PicardResult {
  int iterations = 0;
  std::vector<double> history;  ///< increment norm per iteration
};

/// Fixed-point iteration x <- map(x) until distance(new, old) < tol.
/// Throws ConvergenceError after max_iter iterations or on a non-finite increment.
template <class S, class Map, class Dist>
PicardResult picard_solve(S& x, Map&& map, Dist&& distance, double tol, int max_iter) {
  PicardResult r;
  for (int it = 1; it <= max_iter; ++it) {
    S next = map(x);
    const double inc = distance(next, x);
    x = std::move(next);
    r.history.push_back(inc);
    r.iterations = it;
    if (!std::isfinite(inc)) break;
    if (inc < tol) return r;
  }
  throw ConvergenceError("Picard iteration did not converge in " + std::to_string(r.iterations) + " iterations",
                         r.history);
}

/// One AVF step of length dt with Picard iteration (no dt adaption).
TimeState avf_single_step(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                          const AvfConfig& cfg, const SourceProvider& sources, int* iterations = nullptr);

/// AVF step covering [t, t + dt]; on non-convergence and cfg.adapt_dt the
/// interval is split into two halves, recursively up to cfg.max_halvings.
TimeState avf_step(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                   const AvfConfig& cfg = {}, const SourceProvider& sources = {}, StepStats* stats = nullptr);
TimeState avf_step_fluxfree(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                            const AvfConfig& cfg = {}, const SourceProvider& sources = {}, StepStats* stats = nullptr);
TimeState avf_step_dgflux(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                          const AvfConfig& cfg = {}, const SourceProvider& sources = {}, StepStats* stats = nullptr);

inline double euler_update(double u, double rate, double dt) { return u + dt * rate; }
inline double convex_combination(double a, double x, double b, double y) { return a * x + b * y; }

/// Fields and particles advanced by dt * rates; positions stay unwrapped.
TimeState euler_update(const TimeState& s, const Rates& r, double dt);
/// a x + b y for fields and particle data; flags and ledger are taken from x.
TimeState convex_combination(double a, const TimeState& x, double b, const TimeState& y);

template <class S, class Rhs>
S euler_step(const S& u, double dt, Rhs&& rhs) {
  return euler_update(u, rhs(u), dt);
}

/// Shu-Osher form of the three-stage third-order SSP Runge-Kutta method.
template <class S, class Rhs>
S ssprk3_step(const S& u, double dt, Rhs&& rhs) {
  const S u1 = euler_update(u, rhs(u), dt);
  const S u2 = convex_combination(0.75, u, 0.25, euler_update(u1, rhs(u1), dt));
  return convex_combination(1.0 / 3.0, u, 2.0 / 3.0, euler_update(u2, rhs(u2), dt));
}

/// Wraps periodic positions and deactivates particles outside the domain,
/// adding their weight to removed_weight.
void finalize_particles(const StructuredHexMesh& mesh, TimeState& s);

/// Explicit step (SspRk3 or Euler) of the semi-discrete system, followed by
/// finalize_particles. Sources are evaluated at each stage time.
TimeState explicit_step(const Discretization& disc, const TimeState& state, double dt, const PhysConstants& pc,
                        Integrator kind, const SourceProvider& sources = {});

/// dt max(max_wave_speed, c) / h_min.
double cfl_number(const Discretization& disc, const FieldState& state, const PhysConstants& pc, double dt);

}  // namespace coldplasma
