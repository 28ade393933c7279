#pragma once

#include <span>

#include "coldplasma/sparse.hpp"

namespace coldplasma {

struct CgConfig {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_iter = 20000;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient. `x` holds the initial guess on
/// entry. Stops when ||b - A x|| <= max(rel_tol ||b||, abs_tol); throws
/// SolverError on iteration exhaustion or non-positive curvature.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x, const CgConfig& config);
DofVector cg_solve(const SparseMatrix& a, std::span<const double> b, const CgConfig& config);

/// Discrete Poisson operator G^T M_N G on the constrained nodal space.
SparseMatrix stiffness_matrix_q(const SparseMatrix& gradient, const SparseMatrix& mass_edge);

struct GaussCleanResult {
  DofVector field;
  DofVector a;  ///< potential removing the weak divergence of E
  DofVector b;  ///< potential carrying the prescribed charge
};

/// Projects E onto the set satisfying -G^T M_N E' = f (f already assembled
/// against the constrained nodal basis): E' = E - G a + G b with
/// K a = G^T M_N E and K b = -f, K the stiffness matrix.
GaussCleanResult gauss_clean(const SparseMatrix& gradient, const SparseMatrix& mass_edge, const SparseMatrix& stiffness,
                             std::span<const double> e, std::span<const double> f, const CgConfig& config);

}  // namespace coldplasma
