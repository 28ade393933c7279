#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>

#include "coldplasma/derham.hpp"
#include "coldplasma/fespace.hpp"
#include "coldplasma/quadrature.hpp"
#include "coldplasma/solvers.hpp"

namespace coldplasma {

enum class Formulation {
  FluxFree,  ///< rho in Q1, M in Q1^3 with zero normal trace
  DgFlux,    ///< rho in DG1, M in RT0 with zero normal trace, upwind face fluxes
};

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

/// Coefficients of the discrete fields.
struct FieldState {
  DofVector rho;
  DofVector M;
  DofVector E;
  DofVector B;
};

/// Everything fixed by (mesh, formulation): spaces, mass matrices, sequence
/// operators and the basis tables used by every assembly loop.
class Discretization {
 public:
  Discretization(std::shared_ptr<const StructuredHexMesh> mesh, Formulation formulation, CgConfig cg = {});

  Formulation formulation() const { return formulation_; }
  const StructuredHexMesh& mesh() const { return complex_.mesh(); }
  const std::shared_ptr<const StructuredHexMesh>& mesh_ptr() const { return complex_.mesh_ptr(); }
  const DeRhamComplex& complex() const { return complex_; }
  const CgConfig& cg() const { return cg_; }

  const FeSpace& rho_space() const { return rho_space_; }
  const FeSpace& momentum_space() const { return momentum_space_; }
  const FeSpace& electric_space() const { return complex_.edge(); }
  const FeSpace& magnetic_space() const { return complex_.face(); }
  const FeSpace& potential_space() const { return complex_.nodal(); }

  const SparseMatrix& mass_rho() const { return mass_rho_; }
  const SparseMatrix& mass_momentum() const { return mass_momentum_; }
  const SparseMatrix& mass_electric() const { return complex_.mass_edge(); }
  const SparseMatrix& mass_magnetic() const { return complex_.mass_face(); }

  const QuadratureRule& volume_rule() const { return volume_rule_; }
  const BasisTable& rho_table() const { return rho_table_; }
  const BasisTable& momentum_table() const { return momentum_table_; }
  const BasisTable& electric_table() const { return electric_table_; }
  const BasisTable& magnetic_table() const { return magnetic_table_; }
  const BasisTable& potential_table() const { return potential_table_; }

  /// Face quadrature seen from the cell below (side 1) and above (side 2) a
  /// face normal to `axis`; weights include the face area.
  const BasisTable& rho_face_table(int axis, int side) const { return rho_face_[axis][side]; }
  const BasisTable& momentum_face_table(int axis, int side) const { return momentum_face_[axis][side]; }

  DofVector solve_rho(std::span<const double> rhs, std::span<const double> guess = {}) const;
  DofVector solve_momentum(std::span<const double> rhs, std::span<const double> guess = {}) const;
  DofVector solve_electric(std::span<const double> rhs, std::span<const double> guess = {}) const;
  DofVector solve_magnetic(std::span<const double> rhs, std::span<const double> guess = {}) const;

  FieldState zero_state() const;
  /// Throws InvalidArgument if vector lengths do not match the spaces.
  void check(const FieldState& s) const;

 private:
  Formulation formulation_;
  CgConfig cg_;
  DeRhamComplex complex_;
  FeSpace rho_space_;
  FeSpace momentum_space_;
  SparseMatrix mass_rho_;
  SparseMatrix mass_momentum_;
  QuadratureRule volume_rule_;
  BasisTable rho_table_;
  BasisTable momentum_table_;
  BasisTable electric_table_;
  BasisTable magnetic_table_;
  BasisTable potential_table_;
  std::array<std::array<BasisTable, 2>, 3> rho_face_;
  std::array<std::array<BasisTable, 2>, 3> momentum_face_;
};

}  // namespace coldplasma
