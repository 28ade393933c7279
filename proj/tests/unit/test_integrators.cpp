#include <doctest.h>

#include <cmath>
#include <random>

#include "coldplasma/diagnostics.hpp"
#include "coldplasma/integrators.hpp"
#include "support/random_state.hpp"

using namespace coldplasma;

TEST_CASE("Picard iteration converges on a contraction and reports failure otherwise") {
  double x = 0.0;
  const auto dist = [](double a, double b) { return std::fabs(a - b); };
  const PicardResult r = picard_solve(x, [](double v) { return std::cos(v); }, dist, 1e-12, 200);
  CHECK(x == doctest::Approx(0.7390851332151607).epsilon(1e-11));
  CHECK(r.history.size() == static_cast<std::size_t>(r.iterations));
  double y = 1.0;
  try {
    picard_solve(y, [](double v) { return 2.0 * v; }, dist, 1e-12, 10);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.history().size() == 10);
  }
}

TEST_CASE("xi average integrates cubic paths exactly") {
  const GaussRule1D rule = gauss_legendre(2);
  const double avg = avf_xi_average([](double u) { return u * u * u; }, 1.0, 3.0, rule);
  CHECK(avg == doctest::Approx((81.0 - 1.0) / 4.0 / 2.0));
}

TEST_CASE("SSP-RK3 and Euler have orders three and one on a linear decay") {
  const auto rhs = [](double u) { return -u; };
  auto error = [&](auto step, int n) {
    double u = 1.0;
    const double dt = 1.0 / n;
    for (int i = 0; i < n; ++i) u = step(u, dt);
    return std::fabs(u - std::exp(-1.0));
  };
  const auto rk3 = [&](double u, double dt) { return ssprk3_step(u, dt, rhs); };
  const auto eul = [&](double u, double dt) { return euler_step(u, dt, rhs); };
  CHECK(std::log2(error(rk3, 20) / error(rk3, 40)) == doctest::Approx(3.0).epsilon(0.03));
  CHECK(std::log2(error(eul, 200) / error(eul, 400)) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("an AVF step conserves mass, energy, Gauss's law and div B") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{3, 3, 3},
                                                              Periodicity{false, true, false});
  CgConfig cg;
  cg.rel_tol = 1e-14;
  PhysConstants pc;
  pc.c = 2.0;
  pc.n0 = 1.0;
  AvfConfig avf;
  avf.picard_tol = 1e-13;
  for (Formulation f : {Formulation::FluxFree, Formulation::DgFlux}) {
    const Discretization disc(mesh, f, cg);
    std::mt19937_64 rng(3);
    TimeState s = coldplasma::testing::random_state(disc, rng, 30);
    s.fields.B = disc.complex().ops().C * std::span<const double>(s.fields.E);
    clean_electric_field(disc, s, pc, cg);
    const ConservationReport r0 = conservation_report(disc, s, pc, nullptr);
    StepStats stats;
    const TimeState s1 = avf_step(disc, s, 0.02, pc, avf, {}, &stats);
    const ConservationReport r1 = conservation_report(disc, s1, pc, &r0);
    CHECK(std::fabs(r1.mass_rel_err) < 1e-12);
    CHECK(std::fabs(r1.energy_rel_err) < 1e-10);
    CHECK(r1.gauss_residual_inf < 1e-10);
    CHECK(r1.divB_L2 < 1e-12);
    CHECK(stats.substeps == 1);
    CHECK(stats.picard_iterations > 1);
    CHECK(s1.t == doctest::Approx(0.02));
  }
}

TEST_CASE("AVF halves the step when Picard fails and gives up after the limit") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{2, 2, 2});
  const Discretization disc(mesh, Formulation::FluxFree);
  std::mt19937_64 rng(5);
  const TimeState s = coldplasma::testing::random_state(disc, rng, 0);
  PhysConstants pc;
  AvfConfig avf;
  avf.picard_tol = 1e-9;
  avf.picard_max = 4;
  StepStats stats;
  const TimeState s1 = avf_step(disc, s, 0.05, pc, avf, {}, &stats);
  CHECK(stats.halvings >= 1);
  CHECK(stats.substeps >= 2);
  CHECK(s1.t == doctest::Approx(0.05));
  CHECK(stats.min_dt < 0.05);

  avf.picard_max = 1;
  avf.max_halvings = 1;
  CHECK_THROWS_AS(avf_step(disc, s, 0.05, pc, avf), ConvergenceError);
  avf.adapt_dt = false;
  avf.max_halvings = 6;
  CHECK_THROWS_AS(avf_step(disc, s, 0.05, pc, avf), ConvergenceError);
}

TEST_CASE("finalize_particles wraps periodic axes and removes escapees") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{1, 1, 1}, Index3{2, 2, 2},
                                                              Periodicity{true, true, false});
  TimeState s;
  s.particles.add({1.25, -0.5, 0.5}, {}, 1.0);
  s.particles.add({0.5, 0.5, 1.5}, {}, 3.0);
  finalize_particles(*mesh, s);
  CHECK(s.particles.X[0].x == doctest::Approx(0.25));
  CHECK(s.particles.X[0].y == doctest::Approx(0.5));
  CHECK(s.particles.active[0] == 1);
  CHECK(s.particles.active[1] == 0);
  CHECK(s.removed_weight == 3.0);
}

TEST_CASE("explicit integrators keep div B at round-off") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{3, 3, 3});
  const Discretization disc(mesh, Formulation::DgFlux);
  std::mt19937_64 rng(6);
  TimeState s = coldplasma::testing::random_state(disc, rng, 10);
  s.fields.B = disc.complex().ops().C * std::span<const double>(s.fields.E);
  for (Integrator kind : {Integrator::SspRk3, Integrator::Euler}) {
    const TimeState s1 = explicit_step(disc, s, 1e-3, PhysConstants{}, kind);
    CHECK(divB_norm(disc, s1.fields.B) < 1e-12);
    CHECK(s1.t == doctest::Approx(1e-3));
  }
}
