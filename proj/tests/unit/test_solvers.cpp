#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "coldplasma/error.hpp"
#include "coldplasma/solvers.hpp"
#include "coldplasma/sparse.hpp"

using namespace coldplasma;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) d(i, a.col_index()[k]) += a.values()[k];
  return d;
}

SparseMatrix random_sparse(std::size_t r, std::size_t c, double fill, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (p(rng) < fill) t.push_back({i, j, u(rng)});
  return SparseMatrix(r, c, std::move(t));
}

/// B^T B + n I as a sparse SPD matrix.
SparseMatrix random_spd(std::size_t n, std::mt19937_64& rng) {
  const SparseMatrix b = random_sparse(n, n, 0.2, rng);
  const Eigen::MatrixXd a = dense(b).transpose() * dense(b) + 0.5 * Eigen::MatrixXd::Identity(n, n);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0.0) t.push_back({i, j, a(i, j)});
  return SparseMatrix(n, n, std::move(t));
}

Eigen::VectorXd eig(std::span<const double> v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

}  // namespace

TEST_CASE("duplicate triplets are summed and exact zeros dropped") {
  const SparseMatrix a(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}, {1, 0, 1.0}, {1, 0, -1.0}, {1, 1, 4.0}});
  CHECK(a.nnz() == 2);
  CHECK(a.coeff(0, 0) == 3.0);
  CHECK(a.coeff(1, 0) == 0.0);
  CHECK(a.coeff(1, 1) == 4.0);
}

TEST_CASE("sparse products agree with dense Eigen") {
  std::mt19937_64 rng(1);
  const SparseMatrix a = random_sparse(17, 11, 0.3, rng);
  const SparseMatrix b = random_sparse(11, 9, 0.3, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DofVector x(11), y(17);
  for (double& v : x) v = u(rng);
  for (double& v : y) v = u(rng);

  CHECK((eig(a * std::span<const double>(x)) - dense(a) * eig(x)).norm() < 1e-14);
  DofVector z(11, 0.0);
  a.multiply_transpose_add(2.0, y, z);
  CHECK((eig(z) - 2.0 * dense(a).transpose() * eig(y)).norm() < 1e-14);
  CHECK((dense(a * b) - dense(a) * dense(b)).norm() < 1e-14);
  CHECK((dense(a.transpose()) - dense(a).transpose()).norm() == 0.0);
}

TEST_CASE("Jacobi-preconditioned CG matches a dense Cholesky solve") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {5u, 40u, 120u}) {
    const SparseMatrix a = random_spd(n, rng);
    DofVector b(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : b) v = u(rng);
    CgConfig cfg;
    cfg.rel_tol = 1e-13;
    const DofVector x = cg_solve(a, b, cfg);
    const Eigen::VectorXd ref = dense(a).llt().solve(eig(b));
    CHECK((eig(x) - ref).norm() / ref.norm() < 1e-10);
  }
}

TEST_CASE("CG reports exhaustion and indefinite matrices") {
  std::mt19937_64 rng(3);
  const SparseMatrix a = random_spd(60, rng);
  const DofVector b(60, 1.0);
  CgConfig cfg;
  cfg.max_iter = 2;
  CHECK_THROWS_AS(cg_solve(a, b, cfg), SolverError);
  const SparseMatrix neg(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
  CHECK_THROWS_AS(cg_solve(neg, DofVector{1.0, 1.0}, CgConfig{}), SolverError);
}

TEST_CASE("CG with a zero right-hand side returns the zero vector") {
  const SparseMatrix a = SparseMatrix::identity(4);
  const DofVector x = cg_solve(a, DofVector(4, 0.0), CgConfig{});
  for (double v : x) CHECK(v == 0.0);
}
