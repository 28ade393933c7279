#include <doctest.h>

#include <random>

#include "coldplasma/error.hpp"
#include "coldplasma/particles.hpp"
#include "support/random_state.hpp"

using namespace coldplasma;

TEST_CASE("segment weights sum to one in every component") {
  const StructuredHexMesh mesh({0, 0, 0}, {1, 1, 1}, {4, 5, 3}, {true, true, true});
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0), jump(-1.5, 1.5);
  for (int t = 0; t < 200; ++t) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    Vec3 b = a + Vec3{jump(rng), jump(rng), jump(rng)};
    if (t % 10 == 0) b.y = a.y;
    const SegmentedPath p = segment_and_build_D(mesh, a, b);
    REQUIRE(p.points.size() == p.segments() + 1);
    Vec3 sum;
    for (const Vec3& d : p.D) sum += d;
    CHECK(norm(sum - Vec3{1, 1, 1}) < 1e-12);
    CHECK(norm(p.points.front() - a) == 0.0);
    CHECK(norm(p.points.back() - b) < 1e-14);
    CHECK_FALSE(p.exits);
  }
}

TEST_CASE("paths leaving an open face are truncated at the exit point") {
  const StructuredHexMesh mesh({0, 0, 0}, {1, 1, 1}, {4, 4, 4}, {true, false, false});
  const SegmentedPath p = segment_and_build_D(mesh, {0.5, 0.5, 0.9}, {0.5, 0.5, 1.3});
  CHECK(p.exits);
  CHECK(p.points.back().z == doctest::Approx(1.0));
}

TEST_CASE("segmented current equals the change of the point charge") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{1, 1, 1}, Index3{3, 3, 3},
                                                              Periodicity{true, false, true});
  const DeRhamComplex cx(mesh);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 0.95), jump(-0.8, 0.8), jy(-0.05, 0.05);
  ParticleSet before, after;
  std::vector<SegmentedPath> paths;
  for (int p = 0; p < 30; ++p) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    Vec3 b = a + Vec3{jump(rng), jy(rng), jump(rng)};
    b.y = std::clamp(b.y, 0.01, 0.99);
    before.add(a, {}, 1.0 + p);
    after.add(mesh->wrap(b), {}, 1.0 + p);
    paths.push_back(segment_and_build_D(*mesh, a, b));
  }
  const double dt = 0.3;
  const DofVector j = segmented_current(before, paths, cx.edge(), dt, gauss_legendre(2));
  DofVector dq = deposit_point_charge(after, cx.nodal());
  axpy(-1.0, deposit_point_charge(before, cx.nodal()), dq);
  cx.ops().G.multiply_transpose_add(-dt, j, dq);
  CHECK(norm_inf(dq) < 1e-13);
}

TEST_CASE("Gaussian ball sampler respects the cutoff and is deterministic") {
  const ParticleSet a = sample_gaussian_ball(500, 0.5, 7, 2e-3);
  const ParticleSet b = sample_gaussian_ball(500, 0.5, 7, 2e-3);
  const ParticleSet c = sample_gaussian_ball(500, 0.5, 8, 2e-3);
  REQUIRE(a.size() == 500);
  bool differs = false;
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (int d = 0; d < 3; ++d) {
      CHECK(std::fabs(a.X[p][d]) < 0.5);
      CHECK(a.U[p][d] >= 0.0);
      CHECK(a.U[p][d] < 1.0);
    }
    CHECK(a.X[p].x == b.X[p].x);
    CHECK(a.U[p].z == b.U[p].z);
    differs = differs || a.X[p].x != c.X[p].x;
  }
  CHECK(differs);
  CHECK(a.active_weight() == doctest::Approx(1.0));
  CHECK_THROWS_AS(sample_gaussian_ball(0, 0.5, 1, 1.0), InvalidArgument);
}

TEST_CASE("explicit position push wraps and removes particles") {
  const StructuredHexMesh mesh({0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {true, false, false});
  ParticleSet s;
  const PhysConstants pc;
  s.add({0.9, 0.5, 0.5}, {0.5, 0, 0}, 1.0);
  s.add({0.5, 0.9, 0.5}, {0, 0.5, 0}, 2.0);
  const double removed = push_position_explicit(s, mesh, pc, 1.0);
  const double v = 0.5 / std::sqrt(1.25);
  CHECK(s.X[0].x == doctest::Approx(0.9 + v - 1.0));
  CHECK(s.active[0] == 1);
  CHECK(s.active[1] == 0);
  CHECK(removed == 2.0);
}
