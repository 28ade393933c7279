#include <doctest.h>

#include <numbers>
#include <sstream>

#include "coldplasma/diagnostics.hpp"

using namespace coldplasma;

namespace {

std::shared_ptr<const StructuredHexMesh> periodic_box() {
  return std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{2, 1, 1}, Index3{2, 2, 2},
                                                   Periodicity{true, true, true});
}

}  // namespace

TEST_CASE("mass and energy of constant states") {
  for (Formulation f : {Formulation::FluxFree, Formulation::DgFlux}) {
    const Discretization disc(periodic_box(), f);
    PhysConstants pc;
    pc.m = 2.0;
    pc.c = 3.0;
    FieldState s = disc.zero_state();
    s.rho = l2_project(disc.rho_space(), [](const Vec3&) { return 4.0; });
    s.E = l2_project(disc.electric_space(), [](const Vec3&) { return Vec3{1.0, 2.0, 0.0}; });
    ParticleSet ps;
    ps.add({0.5, 0.5, 0.5}, {0.0, 0.0, 2.0 * 3.0}, 0.25);
    CHECK(total_mass(disc, s, ps, pc) == doctest::Approx(4.0 * 2.0 / 2.0 + 0.25));
    const double particle = 0.25 * (std::sqrt(2.0) - 1.0) * 2.0 * 9.0;
    const double field = 5.0 * 2.0 / (8.0 * std::numbers::pi);
    CHECK(total_energy(disc, s, ps, pc) == doctest::Approx(particle + field));
  }
}

TEST_CASE("relative errors fall back to absolute differences for a zero reference") {
  const Discretization disc(periodic_box(), Formulation::FluxFree);
  TimeState zero;
  zero.fields = disc.zero_state();
  const PhysConstants pc;
  const ConservationReport r0 = conservation_report(disc, zero, pc, nullptr);
  CHECK(r0.total_energy == 0.0);
  TimeState later = zero;
  later.fields.E = l2_project(disc.electric_space(), [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; });
  const ConservationReport r1 = conservation_report(disc, later, pc, &r0);
  CHECK(r1.energy_rel_err == doctest::Approx(r1.total_energy));
  CHECK(r1.mass_rel_err == 0.0);
}

TEST_CASE("CSV rows match the header") {
  const std::string header = csv_header();
  ConservationReport r;
  r.t = 0.125;
  r.energy_rel_err = 1.0 / 3.0;
  const std::string row = csv_row(r);
  auto columns = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(columns(header) == columns(row));
  CHECK(header.rfind("t,", 0) == 0);
  CHECK(row.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("cleaning removes the Gauss residual without touching the curl") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{3, 3, 3});
  CgConfig cg;
  cg.rel_tol = 1e-14;
  const Discretization disc(mesh, Formulation::FluxFree, cg);
  TimeState s;
  s.fields = disc.zero_state();
  s.fields.rho = l2_project(disc.rho_space(), [](const Vec3& x) { return 1.0 + 0.3 * x.x * x.y; });
  s.fields.E = l2_project(disc.electric_space(), [](const Vec3& x) { return Vec3{x.y, x.z * x.z, 0.5}; });
  s.particles.add({0.1, 0.2, 0.3}, {}, 0.1);
  const PhysConstants pc{1.0, 1.0, -1.0, 0.5};
  const DofVector curl0 = disc.complex().ops().C * std::span<const double>(s.fields.E);
  CHECK(gauss_residual(disc, s.fields, s.particles, pc) > 1e-3);
  clean_electric_field(disc, s, pc, cg);
  CHECK(gauss_residual(disc, s.fields, s.particles, pc) < 1e-11);
  DofVector diff = disc.complex().ops().C * std::span<const double>(s.fields.E);
  axpy(-1.0, curl0, diff);
  CHECK(norm_inf(diff) < 1e-12);
}
