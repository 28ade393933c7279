#pragma once

#include <memory>
#include <span>

#include "coldplasma/fespace.hpp"
#include "coldplasma/solvers.hpp"
#include "coldplasma/sparse.hpp"

namespace coldplasma {

/// Coefficient maps of grad: Q -> N, curl: N -> RT and div: RT -> DG.
struct SequenceOperators {
  SparseMatrix G;
  SparseMatrix C;
  SparseMatrix D;
};

SequenceOperators build_sequence(const FeSpace& nodal, const FeSpace& edge, const FeSpace& face, const FeSpace& broken);

/// The constrained lowest-order complex Q1 -> N0 -> RT0 -> DG0 on one mesh
/// with its mass matrices.
class DeRhamComplex {
 public:
  explicit DeRhamComplex(std::shared_ptr<const StructuredHexMesh> mesh, int k = 0);

  const StructuredHexMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const StructuredHexMesh>& mesh_ptr() const { return mesh_; }
  const FeSpace& nodal() const { return nodal_; }
  const FeSpace& edge() const { return edge_; }
  const FeSpace& face() const { return face_; }
  const FeSpace& broken() const { return broken_; }
  const SequenceOperators& ops() const { return ops_; }
  const SparseMatrix& mass_nodal() const { return mass_nodal_; }
  const SparseMatrix& mass_edge() const { return mass_edge_; }
  const SparseMatrix& mass_face() const { return mass_face_; }
  const SparseMatrix& mass_broken() const { return mass_broken_; }
  /// G^T M_N G on the constrained nodal space.
  const SparseMatrix& stiffness() const { return stiffness_; }

 private:
  std::shared_ptr<const StructuredHexMesh> mesh_;
  FeSpace nodal_;
  FeSpace edge_;
  FeSpace face_;
  FeSpace broken_;
  SequenceOperators ops_;
  SparseMatrix mass_nodal_;
  SparseMatrix mass_edge_;
  SparseMatrix mass_face_;
  SparseMatrix mass_broken_;
  SparseMatrix stiffness_;
};

/// Solves M_Q x = -G^T M_N E.
DofVector weak_divergence(const DeRhamComplex& complex, std::span<const double> e, const CgConfig& config = {});

/// Solves M_RT x = -D^T M_DG phi after removing the mean of phi.
DofVector weak_gradient(const DeRhamComplex& complex, std::span<const double> phi, const CgConfig& config = {});

}  // namespace coldplasma
