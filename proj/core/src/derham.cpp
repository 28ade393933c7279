#include "coldplasma/derham.hpp"

#include <array>
#include <cmath>

#include "coldplasma/error.hpp"

namespace coldplasma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(std::string("build_sequence: ") + what);
}

/// Assembles a global operator from one local matrix shared by all cells.
/// Each global row is written once, from the first cell that touches it, so
/// rows shared between cells are not double counted.
SparseMatrix assemble_incidence(const FeSpace& rows, const FeSpace& cols, const std::vector<double>& local) {
  const int nr = rows.dofs_per_cell();
  const int nc = cols.dofs_per_cell();
  std::vector<char> done(rows.n_dofs(), 0);
  std::vector<Triplet> trip;
  for (std::size_t cell = 0; cell < rows.mesh().num_cells(); ++cell) {
    const auto rd = rows.cell_dofs(cell);
    const auto cd = cols.cell_dofs(cell);
    for (int i = 0; i < nr; ++i) {
      if (rd[i] < 0 || done[rd[i]]) continue;
      done[rd[i]] = 1;
      for (int j = 0; j < nc; ++j) {
        const double v = local[static_cast<std::size_t>(i) * nc + j];
        if (v != 0.0 && cd[j] >= 0) trip.push_back({static_cast<std::size_t>(rd[i]), static_cast<std::size_t>(cd[j]), v});
      }
    }
  }
  return SparseMatrix(rows.n_dofs(), cols.n_dofs(), std::move(trip));
}

}  // namespace

SequenceOperators build_sequence(const FeSpace& nodal, const FeSpace& edge, const FeSpace& face, const FeSpace& broken) {
  require(nodal.kind().family == Family::NodalQ && edge.kind().family == Family::EdgeN &&
              face.kind().family == Family::FaceRT && broken.kind().family == Family::BrokenDG,
          "expected NodalQ, EdgeN, FaceRT, BrokenDG");
  require(nodal.kind().degree == 1 && edge.kind().degree == 0 && face.kind().degree == 0 && broken.kind().degree == 0,
          "only the lowest-order complex is supported");
  require(&nodal.mesh() == &edge.mesh() && &edge.mesh() == &face.mesh() && &face.mesh() == &broken.mesh(),
          "spaces live on different meshes");

  const Vec3 h = nodal.mesh().cell_size();

  // grad: edge DOF = difference of vertex values along the edge.
  std::vector<double> g(12 * 8, 0.0);
  for (int d = 0; d < 3; ++d) {
    const int o1 = d == 0 ? 1 : 0;
    const int o2 = d == 2 ? 1 : 2;
    for (int q = 0; q < 2; ++q)
      for (int p = 0; p < 2; ++p) {
        Vec3 start;
        start[o1] = p;
        start[o2] = q;
        Vec3 end = start;
        end[d] = 1.0;
        std::array<double, 8> v0{}, v1{};
        nodal.values(start, v0);
        nodal.values(end, v1);
        for (int v = 0; v < 8; ++v) g[(4 * d + p + 2 * q) * 8 + v] = v1[v] - v0[v];
      }
  }

  // curl: face DOF = flux of the curl, exact at the face centre.
  std::vector<double> c(6 * 12, 0.0);
  for (int d = 0; d < 3; ++d) {
    const int o1 = d == 0 ? 1 : 0;
    const int o2 = d == 2 ? 1 : 2;
    for (int a = 0; a < 2; ++a) {
      Vec3 centre{0.5, 0.5, 0.5};
      centre[d] = a;
      std::array<Vec3, 12> curls{};
      edge.curls(centre, curls);
      for (int e = 0; e < 12; ++e) c[(2 * d + a) * 12 + e] = std::round(curls[e][d] * h[o1] * h[o2]);
    }
  }

  // div: piecewise-constant divergence.
  std::vector<double> dv(6, 0.0);
  std::array<double, 6> divs{};
  face.divergences({0.5, 0.5, 0.5}, divs);
  for (int f = 0; f < 6; ++f) dv[f] = divs[f];

  SequenceOperators ops;
  ops.G = assemble_incidence(edge, nodal, g);
  ops.C = assemble_incidence(face, edge, c);
  ops.D = assemble_incidence(broken, face, dv);
  return ops;
}

DeRhamComplex::DeRhamComplex(std::shared_ptr<const StructuredHexMesh> mesh, int k)
    : mesh_(std::move(mesh)),
      nodal_(mesh_, SpaceKind::nodal(k, true)),
      edge_(mesh_, SpaceKind::edge(k, true)),
      face_(mesh_, SpaceKind::face(k, true)),
      broken_(mesh_, SpaceKind::broken(k, true)),
      ops_(build_sequence(nodal_, edge_, face_, broken_)),
      mass_nodal_(mass_matrix(nodal_)),
      mass_edge_(mass_matrix(edge_)),
      mass_face_(mass_matrix(face_)),
      mass_broken_(mass_matrix(broken_)),
      stiffness_(stiffness_matrix_q(ops_.G, mass_edge_)) {}

DofVector weak_divergence(const DeRhamComplex& complex, std::span<const double> e, const CgConfig& config) {
  const DofVector me = complex.mass_edge() * e;
  DofVector rhs(complex.nodal().n_dofs(), 0.0);
  complex.ops().G.multiply_transpose_add(-1.0, me, rhs);
  return cg_solve(complex.mass_nodal(), rhs, config);
}

DofVector weak_gradient(const DeRhamComplex& complex, std::span<const double> phi, const CgConfig& config) {
  DofVector centred(phi.begin(), phi.end());
  const DofVector ones(centred.size(), 1.0);
  const DofVector m1 = complex.mass_broken() * ones;
  const double mean = dot(m1, centred) / dot(m1, ones);
  for (double& v : centred) v -= mean;
  const DofVector mphi = complex.mass_broken() * centred;
  DofVector rhs(complex.face().n_dofs(), 0.0);
  complex.ops().D.multiply_transpose_add(-1.0, mphi, rhs);
  return cg_solve(complex.mass_face(), rhs, config);
}

}  // namespace coldplasma
