#include "coldplasma/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coldplasma/error.hpp"

namespace coldplasma {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

DofVector linear_combination(double a, std::span<const double> x, double b, std::span<const double> y) {
  DofVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(rows + 1, 0);
  for (std::size_t t = 0; t < triplets.size();) {
    const std::size_t r = triplets[t].row;
    const std::size_t c = triplets[t].col;
    if (r >= rows || c >= cols) throw InvalidArgument("SparseMatrix: triplet index out of range");
    double sum = 0.0;
    while (t < triplets.size() && triplets[t].row == r && triplets[t].col == c) sum += triplets[t++].value;
    if (sum == 0.0) continue;
    col_.push_back(c);
    values_.push_back(sum);
    ++row_ptr_[r + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(t));
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += values_[p] * x[col_[p]];
    y[r] = s;
  }
}

void SparseMatrix::multiply_add(double alpha, std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += values_[p] * x[col_[p]];
    y[r] += alpha * s;
  }
}

void SparseMatrix::multiply_transpose_add(double alpha, std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    const double xr = alpha * x[r];
    if (xr == 0.0) continue;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) y[col_[p]] += values_[p] * xr;
  }
}

DofVector SparseMatrix::operator*(std::span<const double> x) const {
  DofVector y(rows_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) t.push_back({col_[p], r, values_[p]});
  return SparseMatrix(cols_, rows_, std::move(t));
}

DofVector SparseMatrix::diagonal() const {
  DofVector d(std::min(rows_, cols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      if (col_[p] == r) d[r] = values_[p];
  return d;
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const {
  for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
    if (col_[p] == j) return values_[p];
  return 0.0;
}

double SparseMatrix::max_abs() const { return norm_inf(values_); }

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      if (std::fabs(values_[p] - coeff(col_[p], r)) > tol) return false;
  return true;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("SparseMatrix product: dimension mismatch");
  std::vector<Triplet> t;
  std::map<std::size_t, double> row;
  const auto& ap = a.row_ptr();
  const auto& ac = a.col_index();
  const auto& av = a.values();
  const auto& bp = b.row_ptr();
  const auto& bc = b.col_index();
  const auto& bv = b.values();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    row.clear();
    for (std::size_t p = ap[r]; p < ap[r + 1]; ++p)
      for (std::size_t q = bp[ac[p]]; q < bp[ac[p] + 1]; ++q) row[bc[q]] += av[p] * bv[q];
    for (const auto& [c, v] : row) t.push_back({r, c, v});
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(t));
}

}  // namespace coldplasma
