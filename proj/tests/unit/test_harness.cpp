#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "coldplasma/error.hpp"
#include "coldplasma/harness/config.hpp"
#include "coldplasma/harness/experiments.hpp"
#include "coldplasma/harness/io.hpp"
#include "coldplasma/harness/mms.hpp"
#include "support/random_state.hpp"

using namespace coldplasma;
using namespace coldplasma::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "coldplasma_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Residual {
  Vec3 E, B, M;
  double rho = 0.0;
};

/// Strong-form residuals of the manufactured fields by central differences
/// with one Richardson extrapolation.
Residual fd_residual(double t, const Vec3& x, const PhysConstants& pc, double h) {
  auto at = [&](double tt, const Vec3& xx) { return mms_fields(tt, xx, pc); };
  auto diff = [&](auto&& g, double step) {
    // g(s) for s = +-step along the chosen direction
    return (g(step) - g(-step)) / (2.0 * step);
  };
  auto rich = [&](auto&& g) { return (4.0 * diff(g, h / 2) - diff(g, h)) / 3.0; };
  auto rich_vec = [&](auto&& g) {
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = rich([&](double s) { return g(s)[i]; });
    return out;
  };
  const MmsValues v = at(t, x);
  auto unit = [](int d) {
    Vec3 e;
    e[d] = 1.0;
    return e;
  };
  const double g = fluid_gamma(v.rho, v.M, pc.c);
  const Vec3 w = v.M / (v.rho * g);

  Residual r;
  r.E = rich_vec([&](double s) { return at(t + s, x).E; });
  r.B = rich_vec([&](double s) { return at(t + s, x).B; });
  r.M = rich_vec([&](double s) { return at(t + s, x).M; });
  r.rho = rich([&](double s) { return at(t + s, x).rho; });

  Vec3 curlE, curlB;
  for (int d = 0; d < 3; ++d) {
    const Vec3 dE = rich_vec([&](double s) { return at(t, x + s * unit(d)).E; });
    const Vec3 dB = rich_vec([&](double s) { return at(t, x + s * unit(d)).B; });
    const int a = (d + 1) % 3, b = (d + 2) % 3;
    curlE[b] += dE[a];
    curlE[a] -= dE[b];
    curlB[b] += dB[a];
    curlB[a] -= dB[b];
    r.rho += rich([&](double s) {
      const MmsValues q = at(t, x + s * unit(d));
      return q.M[d] / fluid_gamma(q.rho, q.M, pc.c);
    });
    r.M += rich_vec([&](double s) {
      const MmsValues q = at(t, x + s * unit(d));
      return q.M * (q.M[d] / (q.rho * fluid_gamma(q.rho, q.M, pc.c)));
    });
  }
  r.E -= pc.c * curlB;
  r.E += 4.0 * std::numbers::pi * (pc.e / pc.m) * v.M / g;
  r.B += pc.c * curlE;
  r.M -= v.rho * (pc.e / pc.m) * (v.E + cross(w, v.B) / pc.c);
  return r;
}

}  // namespace

TEST_CASE("manufactured sources match finite-difference residuals") {
  PhysConstants pc;
  pc.c = 1.5;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.95, 0.95), tt(0.0, 0.2);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const double t = tt(rng);
    const Residual r = fd_residual(t, x, pc, 1e-3);
    const MmsSources s = mms_sources(t, x, pc);
    worst = std::max({worst, norm_inf(r.E - s.E), norm_inf(r.B - s.B), norm_inf(r.M - s.M), std::fabs(r.rho - s.rho)});
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("manufactured fields satisfy the boundary conditions and div B = 0") {
  PhysConstants pc;
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double t = 0.05 * (k % 4);
    for (int d = 0; d < 3; ++d)
      for (double side : {-1.0, 1.0}) {
        Vec3 x{u(rng), u(rng), u(rng)};
        x[d] = side;
        Vec3 n;
        n[d] = 1.0;
        const MmsValues v = mms_fields(t, x, pc);
        CHECK(norm(cross(n, v.E)) < 1e-12);
        CHECK(std::fabs(v.B[d]) < 1e-12);
        CHECK(std::fabs(v.M[d]) < 1e-12);
      }
    const Vec3 x{u(rng), u(rng), u(rng)};
    const double h = 1e-4;
    double div = 0.0;
    for (int d = 0; d < 3; ++d) {
      Vec3 e;
      e[d] = h;
      div += (mms_fields(t, x + e, pc).B[d] - mms_fields(t, x - e, pc).B[d]) / (2 * h);
    }
    CHECK(std::fabs(div) < 1e-7);
  }
}

TEST_CASE("the vector potential reproduces the initial magnetic field") {
  const PhysConstants pc;
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int k = 0; k < 30; ++k) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const double h = 1e-4;
    Vec3 curl;
    for (int d = 0; d < 3; ++d) {
      Vec3 e;
      e[d] = h;
      const Vec3 dA = (mms_vector_potential(x + e) - mms_vector_potential(x - e)) / (2 * h);
      const int a = (d + 1) % 3, b = (d + 2) % 3;
      curl[b] += dA[a];
      curl[a] -= dA[b];
    }
    CHECK(norm_inf(curl - mms_fields(0.0, x, pc).B) < 1e-7);
  }
}

TEST_CASE("configuration round-trips through INI text") {
  RunConfig cfg = wake_defaults();
  cfg.constants.c = 7.25;
  cfg.avf.theta2 = 0.25;
  cfg.refinements = {3, 6};
  cfg.periodic = {true, false, true};
  const auto path = scratch("roundtrip.ini");
  write_text(path.string(), to_ini(cfg));
  const RunConfig back = load_config(path.string());
  CHECK(to_ini(back) == to_ini(cfg));
  CHECK(back.constants.c == 7.25);
  CHECK(back.refinements == std::vector<int>{3, 6});
}

TEST_CASE("configuration errors are reported") {
  const auto path = scratch("bad.ini");
  write_text(path.string(), "[physics]\nspeed = 3\n");
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
  write_text(path.string(), "c = 3\n");
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
  write_text(path.string(), "[time]\ndt = -1\n");
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);

  RunConfig cfg;
  apply_override(cfg, "mesh.cells=2,3,5");
  CHECK(cfg.cells == Index3{2, 3, 5});
  apply_override(cfg, "mesh.lower = -2");
  CHECK(cfg.lower == Vec3{-2, -2, -2});
  apply_override(cfg, "discretization.formulation=dgflux");
  CHECK(cfg.formulation == Formulation::DgFlux);
  CHECK_THROWS_AS(apply_override(cfg, "nosuch.key=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "physics.c"), ConfigError);
  cfg.avf.theta = 1.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("VTK output reads back at full precision") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{1, 2, 3}, Index3{2, 1, 3});
  const Discretization disc(mesh, Formulation::DgFlux);
  std::mt19937_64 rng(40);
  const TimeState s = coldplasma::testing::random_state(disc, rng, 0);
  const CellFields cf = cell_center_values(disc, s.fields);
  const auto path = scratch("roundtrip.vtk");
  write_vtk(path.string(), *mesh, cf, "unit");
  const VtkData v = read_vtk(path.string());
  CHECK(v.title == "unit");
  CHECK(v.points.size() == 3 * 2 * 4);
  REQUIRE(v.cells.size() == mesh->num_cells());
  for (std::size_t c = 0; c < mesh->num_cells(); ++c) {
    CHECK(v.scalars.at("rho")[c] == cf.rho[c]);
    CHECK(v.vectors.at("E")[c] == cf.E[c]);
    CHECK(v.vectors.at("B")[c] == cf.B[c]);
    CHECK(v.vectors.at("M")[c] == cf.M[c]);
    Vec3 centre;
    for (std::int64_t p : v.cells[c]) centre += v.points[p] / 8.0;
    CHECK(norm(centre - mesh->cell_center(c)) < 1e-14);
  }
}

TEST_CASE("coefficient and particle dumps round-trip exactly") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{2, 2, 2});
  const Discretization disc(mesh, Formulation::FluxFree);
  std::mt19937_64 rng(41);
  TimeState s = coldplasma::testing::random_state(disc, rng, 12);
  s.particles.active[3] = 0;
  const auto coef = scratch("state.coef");
  write_coefficients(coef.string(), s.fields, 0.375);
  double t = 0.0;
  const FieldState f = read_coefficients(coef.string(), &t);
  CHECK(t == 0.375);
  CHECK(f.rho == s.fields.rho);
  CHECK(f.M == s.fields.M);
  CHECK(f.E == s.fields.E);
  CHECK(f.B == s.fields.B);

  const auto csv = scratch("particles.csv");
  write_particles_csv(csv.string(), s.particles);
  const ParticleSet p = read_particles_csv(csv.string());
  REQUIRE(p.size() == s.particles.size());
  CHECK(p.X == s.particles.X);
  CHECK(p.U == s.particles.U);
  CHECK(p.w == s.particles.w);
  CHECK(p.active == s.particles.active);
  write_text(coef.string(), "garbage");
  CHECK_THROWS_AS(read_coefficients(coef.string()), Error);
}

TEST_CASE("conservation runs are bitwise reproducible") {
  RunConfig cfg = conservation_defaults();
  cfg.cells = {3, 3, 3};
  cfg.particle_count = 40;
  cfg.t_end = 0.02;
  cfg.dt = 0.01;
  cfg.constants.c = 2.0;
  std::string first;
  for (int run = 0; run < 2; ++run) {
    cfg.output_dir = scratch("repro" + std::to_string(run)).string();
    run_conservation(cfg);
    const std::string text = slurp(std::filesystem::path(cfg.output_dir) / "conservation.csv");
    CHECK_FALSE(text.empty());
    if (run == 0)
      first = text;
    else
      CHECK(text == first);
  }
}

TEST_CASE("order fitting and step counts") {
  const std::vector<double> h{0.5, 0.25, 0.125};
  const std::vector<double> e{2.0 * 0.125, 2.0 * 0.015625, 2.0 * 0.001953125};
  CHECK(fit_order(h, e) == doctest::Approx(3.0));
  CHECK(step_count(0.3, 5e-3) == 60);
  CHECK(step_count(0.1, 0.03) == 4);
  const StructuredHexMesh mesh({0, 0, 0}, {1, 1, 1}, {4, 4, 4});
  CHECK(explicit_dt_limit(mesh, 1.0) == doctest::Approx(std::sqrt(3.0) / (2.0 * std::sqrt(3.0) * std::sqrt(48.0))));
}
