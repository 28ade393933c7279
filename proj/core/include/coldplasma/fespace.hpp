#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coldplasma/mesh.hpp"
#include "coldplasma/quadrature.hpp"
#include "coldplasma/solvers.hpp"
#include "coldplasma/sparse.hpp"
#include "coldplasma/vec3.hpp"

namespace coldplasma {

enum class Family {
  NodalQ,        ///< continuous tensor-product Lagrange, scalar
  NodalVectorQ,  ///< three copies of NodalQ; constraint removes normal components
  EdgeN,         ///< curl-conforming hexahedral edge elements
  FaceRT,        ///< div-conforming hexahedral face elements
  BrokenDG,      ///< discontinuous tensor-product polynomials
};

enum class Derivative { None, Gradient, Curl, Divergence };

struct SpaceKind {
  Family family = Family::NodalQ;
  int degree = 1;  ///< polynomial degree of the element itself
  bool constrained = false;

  /// Q_{k+1}; constrained means zero trace.
  static SpaceKind nodal(int k, bool constrained) { return {Family::NodalQ, k + 1, constrained}; }
  /// Q_{k+1}^3; constrained means zero normal component.
  static SpaceKind nodal_vector(int k, bool constrained) { return {Family::NodalVectorQ, k + 1, constrained}; }
  /// N_k; constrained means zero tangential trace.
  static SpaceKind edge(int k, bool constrained) { return {Family::EdgeN, k, constrained}; }
  /// RT_k; constrained means zero normal trace.
  static SpaceKind face(int k, bool constrained) { return {Family::FaceRT, k, constrained}; }
  /// Discontinuous space of the given degree; constrained means zero mean,
  /// which is applied as a projection by the operators that need it.
  static SpaceKind broken(int degree, bool zero_mean) { return {Family::BrokenDG, degree, zero_mean}; }

  bool is_vector() const { return family == Family::NodalVectorQ || family == Family::EdgeN || family == Family::FaceRT; }
  std::string name() const;
};

/// Finite-element space on a structured mesh. The reference basis is the same
/// for every cell; `cell_dofs` maps local to global indices, with -1 marking
/// local functions removed by the boundary constraint.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const StructuredHexMesh> mesh, SpaceKind kind);

  const StructuredHexMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const StructuredHexMesh>& mesh_ptr() const { return mesh_; }
  const SpaceKind& kind() const { return kind_; }
  bool is_vector() const { return kind_.is_vector(); }
  std::size_t n_dofs() const { return n_dofs_; }
  int dofs_per_cell() const { return local_; }
  std::span<const std::int64_t> cell_dofs(std::size_t cell) const {
    return {dofs_.data() + cell * static_cast<std::size_t>(local_), static_cast<std::size_t>(local_)};
  }
  /// Default volume quadrature: (k+3)^3 Gauss points.
  int quadrature_points() const { return quad_points_; }

  void values(const Vec3& ref, std::span<double> out) const;
  void values(const Vec3& ref, std::span<Vec3> out) const;
  void gradients(const Vec3& ref, std::span<Vec3> out) const;
  void jacobians(const Vec3& ref, std::span<Mat3> out) const;
  void curls(const Vec3& ref, std::span<Vec3> out) const;
  void divergences(const Vec3& ref, std::span<double> out) const;

 private:
  std::shared_ptr<const StructuredHexMesh> mesh_;
  SpaceKind kind_;
  int local_ = 0;
  int quad_points_ = 3;
  std::size_t n_dofs_ = 0;
  std::vector<std::int64_t> dofs_;
};

/// Per-DOF basis values at one point together with one derivative.
struct BasisEvaluation {
  std::vector<double> scalar;        ///< scalar families
  std::vector<Vec3> vector;          ///< vector families
  std::vector<Vec3> vector_derivative;  ///< gradient (scalar families) or curl (EdgeN)
  std::vector<double> scalar_derivative;  ///< divergence (FaceRT, NodalVectorQ)
};

BasisEvaluation eval_basis(const FeSpace& space, const Vec3& ref, Derivative derivative);

/// Reference basis data tabulated at the points of a quadrature rule.
/// Weights are physical (reference weight times cell volume).
struct BasisTable {
  int nq = 0;
  int nloc = 0;
  std::vector<double> weights;
  std::vector<double> value;  ///< scalar value, index q * nloc + i
  std::vector<Vec3> vvalue;   ///< vector value
  std::vector<Vec3> grad;     ///< gradient (scalar) or curl (EdgeN)
  std::vector<Mat3> jac;      ///< Jacobian (vector families)
  std::vector<double> div;    ///< divergence (FaceRT, NodalVectorQ)
};

BasisTable tabulate(const FeSpace& space, const QuadratureRule& rule);

using ScalarFunction = std::function<double(const Vec3&)>;
using VectorFunction = std::function<Vec3(const Vec3&)>;
using FieldValue = std::variant<double, Vec3>;

SparseMatrix mass_matrix(const FeSpace& space);

/// Load vector with entries integral of f times basis_i.
DofVector assemble_load(const FeSpace& space, const ScalarFunction& f, int quad_points = 0);
DofVector assemble_load(const FeSpace& space, const VectorFunction& f, int quad_points = 0);

DofVector l2_project(const FeSpace& space, const ScalarFunction& f, const CgConfig& config = {});
DofVector l2_project(const FeSpace& space, const VectorFunction& f, const CgConfig& config = {});

double eval_scalar(const FeSpace& space, std::span<const double> coeffs, const CellRef& at);
Vec3 eval_vector(const FeSpace& space, std::span<const double> coeffs, const CellRef& at);
/// Point evaluation using the deterministic cell choice of locate_point.
FieldValue eval_field(const FeSpace& space, std::span<const double> coeffs, const Vec3& x);

/// L2 norm of (field - f) with an n^3 Gauss rule per cell.
double l2_error(const FeSpace& space, std::span<const double> coeffs, const ScalarFunction& f, int quad_points);
double l2_error(const FeSpace& space, std::span<const double> coeffs, const VectorFunction& f, int quad_points);

}  // namespace coldplasma
