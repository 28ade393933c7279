#include "coldplasma/solvers.hpp"

#include <cmath>
#include <sstream>

#include "coldplasma/error.hpp"

namespace coldplasma {

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x, const CgConfig& config) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n || x.size() != n) throw InvalidArgument("cg_solve: dimension mismatch");

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }
  const double target = std::max(config.rel_tol * bnorm, config.abs_tol);

  DofVector inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (d <= 0.0) throw SolverError("cg_solve: non-positive diagonal entry, matrix is not SPD", 0.0, 0);
    d = 1.0 / d;
  }

  DofVector r(n), z(n), p(n), q(n);
  a.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  if (rnorm <= target) return {0, rnorm / bnorm};

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= config.max_iter; ++it) {
    a.multiply(p, q);
    const double curvature = dot(p, q);
    if (!(curvature > 0.0)) {
      throw SolverError("cg_solve: non-positive curvature encountered", rnorm / bnorm, it);
    }
    const double alpha = rz / curvature;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    rnorm = norm2(r);
    if (rnorm <= target) return {it, rnorm / bnorm};
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream msg;
  msg << "cg_solve: no convergence after " << config.max_iter << " iterations, relative residual " << rnorm / bnorm;
  throw SolverError(msg.str(), rnorm / bnorm, config.max_iter);
}

DofVector cg_solve(const SparseMatrix& a, std::span<const double> b, const CgConfig& config) {
  DofVector x(a.rows(), 0.0);
  cg_solve(a, b, x, config);
  return x;
}

SparseMatrix stiffness_matrix_q(const SparseMatrix& gradient, const SparseMatrix& mass_edge) {
  return gradient.transpose() * (mass_edge * gradient);
}

GaussCleanResult gauss_clean(const SparseMatrix& gradient, const SparseMatrix& mass_edge, const SparseMatrix& stiffness,
                             std::span<const double> e, std::span<const double> f, const CgConfig& config) {
  const DofVector me = mass_edge * e;
  DofVector rhs_a(gradient.cols(), 0.0);
  gradient.multiply_transpose_add(1.0, me, rhs_a);
  DofVector rhs_b(f.begin(), f.end());
  for (double& v : rhs_b) v = -v;

  GaussCleanResult out;
  out.a = cg_solve(stiffness, rhs_a, config);
  out.b = cg_solve(stiffness, rhs_b, config);
  out.field.assign(e.begin(), e.end());
  const DofVector diff = linear_combination(1.0, out.b, -1.0, out.a);
  gradient.multiply_add(1.0, diff, out.field);
  return out;
}

}  // namespace coldplasma
