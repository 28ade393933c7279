#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coldplasma {

using DofVector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// a * x + b * y as a new vector.
DofVector linear_combination(double a, std::span<const double> x, double b, std::span<const double> y);

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Duplicate triplets are summed; entries that
/// sum to exactly zero are dropped.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += alpha A x
  void multiply_add(double alpha, std::span<const double> x, std::span<double> y) const;
  /// y += alpha A^T x
  void multiply_transpose_add(double alpha, std::span<const double> x, std::span<double> y) const;
  DofVector operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  DofVector diagonal() const;
  double coeff(std::size_t i, std::size_t j) const;
  double max_abs() const;
  bool is_symmetric(double tol) const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_index() const { return col_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_;
  std::vector<double> values_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace coldplasma
