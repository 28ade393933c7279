#include "coldplasma/discretization.hpp"

#include "coldplasma/error.hpp"

namespace coldplasma {

std::string to_string(Formulation f) { return f == Formulation::FluxFree ? "fluxfree" : "dgflux"; }

Formulation formulation_from_string(const std::string& s) {
  if (s == "fluxfree") return Formulation::FluxFree;
  if (s == "dgflux") return Formulation::DgFlux;
  throw InvalidArgument("unknown formulation '" + s + "' (expected fluxfree or dgflux)");
}

namespace {

SpaceKind rho_kind(Formulation f) {
  return f == Formulation::FluxFree ? SpaceKind::nodal(0, false) : SpaceKind::broken(1, false);
}

SpaceKind momentum_kind(Formulation f) {
  return f == Formulation::FluxFree ? SpaceKind::nodal_vector(0, true) : SpaceKind::face(0, true);
}

BasisTable face_table(const FeSpace& space, int axis, int side) {
  const QuadratureRule rule = face_rule(space.quadrature_points(), axis, side == 0 ? 1.0 : 0.0);
  BasisTable t = tabulate(space, rule);
  const Vec3& h = space.mesh().cell_size();
  const double area = space.mesh().cell_volume() / h[axis];
  for (int q = 0; q < t.nq; ++q) t.weights[q] = rule.weights[q] * area;
  return t;
}

DofVector solve_with(const SparseMatrix& m, std::span<const double> rhs, std::span<const double> guess, const CgConfig& cg) {
  DofVector x(m.rows(), 0.0);
  if (guess.size() == x.size()) std::copy(guess.begin(), guess.end(), x.begin());
  cg_solve(m, rhs, x, cg);
  return x;
}

}  // namespace

Discretization::Discretization(std::shared_ptr<const StructuredHexMesh> mesh, Formulation formulation, CgConfig cg)
    : formulation_(formulation),
      cg_(cg),
      complex_(std::move(mesh)),
      rho_space_(complex_.mesh_ptr(), rho_kind(formulation)),
      momentum_space_(complex_.mesh_ptr(), momentum_kind(formulation)),
      mass_rho_(mass_matrix(rho_space_)),
      mass_momentum_(mass_matrix(momentum_space_)),
      volume_rule_(hex_rule(rho_space_.quadrature_points())),
      rho_table_(tabulate(rho_space_, volume_rule_)),
      momentum_table_(tabulate(momentum_space_, volume_rule_)),
      electric_table_(tabulate(complex_.edge(), volume_rule_)),
      magnetic_table_(tabulate(complex_.face(), volume_rule_)),
      potential_table_(tabulate(complex_.nodal(), volume_rule_)) {
  if (formulation_ == Formulation::DgFlux) {
    for (int axis = 0; axis < 3; ++axis)
      for (int side = 0; side < 2; ++side) {
        rho_face_[axis][side] = face_table(rho_space_, axis, side);
        momentum_face_[axis][side] = face_table(momentum_space_, axis, side);
      }
  }
}

DofVector Discretization::solve_rho(std::span<const double> rhs, std::span<const double> guess) const {
  return solve_with(mass_rho_, rhs, guess, cg_);
}

DofVector Discretization::solve_momentum(std::span<const double> rhs, std::span<const double> guess) const {
  return solve_with(mass_momentum_, rhs, guess, cg_);
}

DofVector Discretization::solve_electric(std::span<const double> rhs, std::span<const double> guess) const {
  return solve_with(mass_electric(), rhs, guess, cg_);
}

DofVector Discretization::solve_magnetic(std::span<const double> rhs, std::span<const double> guess) const {
  return solve_with(mass_magnetic(), rhs, guess, cg_);
}

FieldState Discretization::zero_state() const {
  return {DofVector(rho_space_.n_dofs(), 0.0), DofVector(momentum_space_.n_dofs(), 0.0),
          DofVector(electric_space().n_dofs(), 0.0), DofVector(magnetic_space().n_dofs(), 0.0)};
}

void Discretization::check(const FieldState& s) const {
  if (s.rho.size() != rho_space_.n_dofs() || s.M.size() != momentum_space_.n_dofs() ||
      s.E.size() != electric_space().n_dofs() || s.B.size() != magnetic_space().n_dofs())
    throw InvalidArgument("FieldState does not match the spaces of the " + to_string(formulation_) + " discretization");
}

}  // namespace coldplasma
