#include <doctest.h>

#include <random>

#include "coldplasma/error.hpp"
#include "coldplasma/mesh.hpp"

using namespace coldplasma;

TEST_CASE("cell indexing round-trips and cell centres lie in their cells") {
  const StructuredHexMesh mesh({-1, 0, 2}, {1, 3, 4}, {2, 3, 4});
  CHECK(mesh.num_cells() == 24);
  CHECK(mesh.cell_volume() == doctest::Approx(1.0 * 1.0 * 0.5));
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    CHECK(mesh.cell_index(mesh.cell_coords(c)) == c);
    const auto at = mesh.locate_point(mesh.cell_center(c));
    REQUIRE(at);
    CHECK(at->cell == c);
    CHECK(at->ref.x == doctest::Approx(0.5));
  }
}

TEST_CASE("degenerate meshes are rejected") {
  CHECK_THROWS_AS(StructuredHexMesh({0, 0, 0}, {1, 1, 1}, {0, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(StructuredHexMesh({0, 0, 0}, {1, -1, 1}, {1, 1, 1}), InvalidArgument);
}

TEST_CASE("interior faces count identified periodic faces") {
  const StructuredHexMesh open({0, 0, 0}, {1, 1, 1}, {3, 3, 3});
  const StructuredHexMesh per({0, 0, 0}, {1, 1, 1}, {3, 3, 3}, {true, false, true});
  CHECK(open.interior_faces().size() == 3 * 2 * 9);
  CHECK(per.interior_faces().size() == (3 + 2 + 3) * 9);
  std::size_t periodic = 0;
  for (const Face& f : per.interior_faces()) periodic += f.periodic ? 1 : 0;
  CHECK(periodic == 2 * 9);
}

TEST_CASE("wrap and contains follow the periodicity flags") {
  const StructuredHexMesh mesh({-1, -1, -1}, {1, 1, 1}, {4, 4, 4}, {true, false, false});
  const Vec3 w = mesh.wrap({1.25, 0.5, 0.5});
  CHECK(w.x == doctest::Approx(-0.75));
  CHECK(mesh.contains({1.25, 0.5, 0.5}));
  CHECK_FALSE(mesh.contains({0.0, 1.25, 0.0}));
  CHECK_FALSE(mesh.locate_point({0.0, 0.0, 1.5}));
}

TEST_CASE("segment intersection points are ordered and lie on grid planes") {
  const StructuredHexMesh mesh({-1, -1, -1}, {1, 1, 1}, {4, 4, 4}, {true, true, true});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), jump(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    const Vec3 b = a + Vec3{jump(rng), jump(rng), jump(rng)};
    const auto pts = mesh.intersect_segment_with_faces(a, b);
    REQUIRE(pts.size() >= 2);
    CHECK(pts.front() == a);
    CHECK(pts.back() == b);
    double last = -1.0;
    const Vec3 d = b - a;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      const double t = dot(pts[i] - a, d) / dot(d, d);
      CHECK(t >= last - 1e-14);
      last = t;
      bool on_plane = false;
      for (int k = 0; k < 3; ++k) {
        const double s = (pts[i][k] + 1.0) / 0.5;
        on_plane = on_plane || std::fabs(s - std::round(s)) < 1e-12;
      }
      CHECK(on_plane);
    }
    // Every sub-segment lies inside one cell of the periodic cover.
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const auto sc = mesh.segment_cell(pts[i], pts[i + 1]);
      const Vec3 mid = 0.5 * (pts[i] + pts[i + 1]);
      for (int k = 0; k < 3; ++k) {
        const double r = (mid[k] - sc.origin[k]) / 0.5;
        CHECK(r >= -1e-12);
        CHECK(r <= 1.0 + 1e-12);
      }
    }
  }
}
