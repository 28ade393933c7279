#include <doctest.h>

#include <random>

#include "coldplasma/error.hpp"
#include "coldplasma/semidiscrete.hpp"
#include "support/random_state.hpp"

using namespace coldplasma;

TEST_CASE("upwind flux picks the upstream side and averages at zero") {
  CHECK(upwind_flux(2.0, 5.0, 1.0) == 2.0);
  CHECK(upwind_flux(2.0, 5.0, -1e-300) == 5.0);
  CHECK(upwind_flux(2.0, 5.0, 0.0) == 3.5);
}

TEST_CASE("closures agree with their naive definitions") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0), r(0.1, 4.0), cc(0.5, 20.0);
  for (int t = 0; t < 200; ++t) {
    const double rho = r(rng), c = cc(rng);
    const Vec3 M{u(rng), u(rng), u(rng)};
    const double g = std::sqrt(1.0 + dot(M, M) / (rho * rho * c * c));
    CHECK(fluid_gamma(rho, M, c) == doctest::Approx(g).epsilon(1e-14));
    CHECK(fluid_energy_density(rho, M, c) == doctest::Approx(rho * (g - 1.0) * c * c).epsilon(1e-9));
    CHECK(kinetic_bracket(rho, M, c) == doctest::Approx(1.0 / g - 1.0).epsilon(1e-9));
    CHECK(norm(fluid_velocity(rho, M, c) - M / (rho * g)) < 1e-14 * (1.0 + norm(M / rho)));
    // The kinetic bracket is the rho-derivative of the energy density over c^2.
    const double hstep = 1e-6 * rho;
    const double fd = (fluid_energy_density(rho + hstep, M, c) - fluid_energy_density(rho - hstep, M, c)) / (2 * hstep);
    CHECK(fd / (c * c) == doctest::Approx(kinetic_bracket(rho, M, c)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("semi-discrete rates preserve mass, energy, Gauss and div B") {
  using namespace coldplasma::testing;
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{3, 3, 3},
                                                              Periodicity{true, false, false});
  CgConfig cg;
  cg.rel_tol = 1e-14;
  PhysConstants pc;
  pc.c = 2.0;
  pc.n0 = 1.0;
  for (Formulation f : {Formulation::FluxFree, Formulation::DgFlux}) {
    const Discretization disc(mesh, f, cg);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 3; ++t) {
      const TimeState s = random_state(disc, rng, 20);
      const Rates r = semidiscrete_rhs(disc, s.fields, s.particles, pc);
      const InvariantRates ir = invariant_rates(disc, s, pc, r);
      CHECK(std::fabs(ir.mass) < 1e-11);
      CHECK(std::fabs(ir.energy) < 1e-10);
      CHECK(ir.gauss < 1e-10);
      CHECK(ir.divB < 1e-12);
    }
  }
}

TEST_CASE("closure projection rejects a non-positive density") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{1, 1, 1}, Index3{2, 2, 2});
  for (Formulation f : {Formulation::FluxFree, Formulation::DgFlux}) {
    const Discretization disc(mesh, f);
    FieldState s = disc.zero_state();
    s.rho.assign(s.rho.size(), 1.0);
    s.rho.back() = -0.5;
    CHECK_THROWS_AS(semidiscrete_rhs(disc, s, ParticleSet{}, PhysConstants{}), PositivityError);
  }
}

TEST_CASE("a uniform fluid at rest with neutral background is stationary") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{1, 1, 1}, Index3{2, 2, 2},
                                                              Periodicity{true, true, true});
  for (Formulation f : {Formulation::FluxFree, Formulation::DgFlux}) {
    const Discretization disc(mesh, f);
    FieldState s = disc.zero_state();
    s.rho = l2_project(disc.rho_space(), [](const Vec3&) { return 1.0; });
    const Rates r = semidiscrete_rhs(disc, s, ParticleSet{}, PhysConstants{1.0, 1.0, -1.0, 1.0});
    CHECK(norm_inf(r.rho) < 1e-13);
    CHECK(norm_inf(r.M) < 1e-13);
    CHECK(norm_inf(r.E) < 1e-13);
    CHECK(norm_inf(r.B) < 1e-13);
  }
}
