#include <doctest.h>

#include <memory>
#include <random>

#include "coldplasma/derham.hpp"
#include "coldplasma/error.hpp"
#include "coldplasma/fespace.hpp"
#include "coldplasma/quadrature.hpp"

using namespace coldplasma;

namespace {

std::shared_ptr<const StructuredHexMesh> box(Periodicity per = {false, false, false}) {
  return std::make_shared<const StructuredHexMesh>(Vec3{-1, -0.5, 0}, Vec3{1, 1, 1.2}, Index3{3, 4, 2}, per);
}

DofVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DofVector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Vec3 random_ref(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("Q1 basis is a partition of unity with zero gradient sum") {
  const FeSpace q(box(), SpaceKind::nodal(0, false));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const BasisEvaluation ev = eval_basis(q, random_ref(rng), Derivative::Gradient);
    double s = 0.0;
    Vec3 g;
    for (std::size_t i = 0; i < ev.scalar.size(); ++i) {
      s += ev.scalar[i];
      g += ev.vector_derivative[i];
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(norm(g) < 1e-13);
  }
}

TEST_CASE("edge and face degrees of freedom are dual to the basis") {
  const auto mesh = box();
  const FeSpace edge(mesh, SpaceKind::edge(0, false));
  const FeSpace face(mesh, SpaceKind::face(0, false));
  const GaussRule1D rule = gauss_legendre(3);
  const Vec3& h = mesh->cell_size();
  std::array<Vec3, 12> nu;
  // Local edge 4d + p + 2q runs along axis d at offsets (p, q) in the other two axes.
  for (int d = 0; d < 3; ++d) {
    const int o1 = d == 0 ? 1 : 0, o2 = d == 2 ? 1 : 2;
    for (int q = 0; q < 2; ++q)
      for (int p = 0; p < 2; ++p) {
        std::array<double, 12> integral{};
        for (std::size_t k = 0; k < rule.points.size(); ++k) {
          Vec3 r;
          r[d] = rule.points[k];
          r[o1] = p;
          r[o2] = q;
          edge.values(r, nu);
          for (int i = 0; i < 12; ++i) integral[i] += rule.weights[k] * nu[i][d] * h[d];
        }
        for (int i = 0; i < 12; ++i) CHECK(integral[i] == doctest::Approx(i == 4 * d + p + 2 * q ? 1.0 : 0.0));
      }
  }
  // Face functions: the flux through the own face is one and the normal trace vanishes on the others.
  std::array<Vec3, 6> rt;
  for (int d = 0; d < 3; ++d)
    for (int side = 0; side < 2; ++side) {
      const QuadratureRule fr = face_rule(2, d, side);
      std::array<double, 6> flux{};
      for (std::size_t k = 0; k < fr.size(); ++k) {
        face.values(fr.points[k], rt);
        const double area = mesh->cell_volume() / h[d];
        for (int i = 0; i < 6; ++i) flux[i] += fr.weights[k] * rt[i][d] * area;
      }
      int own = 0;
      for (int i = 0; i < 6; ++i)
        if (std::fabs(flux[i]) > 0.5) ++own;
      CHECK(own == 1);
    }
}

TEST_CASE("sequence matrices commute with pointwise derivatives") {
  for (Periodicity per : {Periodicity{false, false, false}, Periodicity{true, false, true}}) {
    const DeRhamComplex cx(box(per));
    std::mt19937_64 rng(5);
    const DofVector phi = random_vector(cx.nodal().n_dofs(), rng);
    const DofVector e = random_vector(cx.edge().n_dofs(), rng);
    const DofVector b = random_vector(cx.face().n_dofs(), rng);
    const DofVector gphi = cx.ops().G * std::span<const double>(phi);
    const DofVector ce = cx.ops().C * std::span<const double>(e);
    const DofVector db = cx.ops().D * std::span<const double>(b);
    for (int t = 0; t < 40; ++t) {
      const CellRef at{static_cast<std::size_t>(t) % cx.mesh().num_cells(), random_ref(rng)};
      auto local = [&](const FeSpace& sp, const DofVector& c, std::size_t i) {
        const auto dofs = sp.cell_dofs(at.cell);
        return dofs[i] >= 0 ? c[dofs[i]] : 0.0;
      };
      const BasisEvaluation qn = eval_basis(cx.nodal(), at.ref, Derivative::Gradient);
      Vec3 grad;
      for (std::size_t i = 0; i < qn.scalar.size(); ++i) grad += local(cx.nodal(), phi, i) * qn.vector_derivative[i];
      CHECK(norm(eval_vector(cx.edge(), gphi, at) - grad) < 1e-12);

      const BasisEvaluation ne = eval_basis(cx.edge(), at.ref, Derivative::Curl);
      Vec3 curl;
      for (std::size_t i = 0; i < ne.vector.size(); ++i) curl += local(cx.edge(), e, i) * ne.vector_derivative[i];
      CHECK(norm(eval_vector(cx.face(), ce, at) - curl) < 1e-12);

      const BasisEvaluation rf = eval_basis(cx.face(), at.ref, Derivative::Divergence);
      double div = 0.0;
      for (std::size_t i = 0; i < rf.vector.size(); ++i) div += local(cx.face(), b, i) * rf.scalar_derivative[i];
      CHECK(eval_scalar(cx.broken(), db, at) == doctest::Approx(div).epsilon(1e-12));
    }
  }
}

TEST_CASE("mass matrices are symmetric and integrate constants") {
  const auto mesh = box();
  const FeSpace q(mesh, SpaceKind::nodal(0, false));
  const SparseMatrix m = mass_matrix(q);
  CHECK(m.is_symmetric(1e-15));
  const DofVector ones(q.n_dofs(), 1.0);
  const DofVector m1 = m * std::span<const double>(ones);
  CHECK(dot(m1, ones) == doctest::Approx(mesh->domain_volume()));
}

TEST_CASE("L2 projection reproduces fields in the space") {
  const auto mesh = box();
  const FeSpace q(mesh, SpaceKind::nodal(0, false));
  const FeSpace edge(mesh, SpaceKind::edge(0, false));
  CgConfig cg;
  cg.rel_tol = 1e-14;
  const ScalarFunction lin = [](const Vec3& x) { return 1.0 + 2.0 * x.x - x.y + 0.5 * x.x * x.y * x.z; };
  CHECK(l2_error(q, l2_project(q, lin, cg), lin, 4) < 1e-12);
  const VectorFunction cst = [](const Vec3&) { return Vec3{1.0, -2.0, 0.5}; };
  CHECK(l2_error(edge, l2_project(edge, cst, cg), cst, 4) < 1e-12);
}

TEST_CASE("constrained spaces drop boundary degrees of freedom") {
  const auto mesh = std::make_shared<const StructuredHexMesh>(Vec3{0, 0, 0}, Vec3{1, 1, 1}, Index3{2, 2, 2});
  CHECK(FeSpace(mesh, SpaceKind::nodal(0, false)).n_dofs() == 27);
  CHECK(FeSpace(mesh, SpaceKind::nodal(0, true)).n_dofs() == 1);
  CHECK(FeSpace(mesh, SpaceKind::edge(0, false)).n_dofs() == 54);
  CHECK(FeSpace(mesh, SpaceKind::edge(0, true)).n_dofs() == 6);
  CHECK(FeSpace(mesh, SpaceKind::face(0, false)).n_dofs() == 36);
  CHECK(FeSpace(mesh, SpaceKind::face(0, true)).n_dofs() == 12);
  CHECK(FeSpace(mesh, SpaceKind::broken(0, false)).n_dofs() == 8);
  CHECK_THROWS_AS(FeSpace(mesh, SpaceKind::edge(3, false)), InvalidArgument);
}

TEST_CASE("weak divergence and weak gradient are adjoint to the strong operators") {
  const DeRhamComplex cx(box());
  std::mt19937_64 rng(9);
  CgConfig cg;
  cg.rel_tol = 1e-14;
  const DofVector e = random_vector(cx.edge().n_dofs(), rng);
  const DofVector psi = random_vector(cx.nodal().n_dofs(), rng);
  // (div_w E, psi)_Q = -(E, grad psi)_N
  const DofVector dw = weak_divergence(cx, e, cg);
  const double lhs = dot(cx.mass_nodal() * std::span<const double>(dw), psi);
  const DofVector gpsi = cx.ops().G * std::span<const double>(psi);
  const double rhs = -dot(cx.mass_edge() * std::span<const double>(e), gpsi);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}
