#pragma once

#include <array>
#include <span>

#include "coldplasma/fespace.hpp"

namespace coldplasma::detail {

inline constexpr int kMaxLocal = 24;
using Local = std::array<double, kMaxLocal>;

inline void gather(const FeSpace& space, std::size_t cell, std::span<const double> coeffs, Local& out) {
  const auto dofs = space.cell_dofs(cell);
  for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = dofs[i] >= 0 ? coeffs[dofs[i]] : 0.0;
}

inline void scatter_add(const FeSpace& space, std::size_t cell, const Local& local, std::span<double> out) {
  const auto dofs = space.cell_dofs(cell);
  for (std::size_t i = 0; i < dofs.size(); ++i)
    if (dofs[i] >= 0) out[dofs[i]] += local[i];
}

inline double scalar_at(const BasisTable& t, int q, const Local& c) {
  const double* v = t.value.data() + static_cast<std::size_t>(q) * t.nloc;
  double s = 0.0;
  for (int i = 0; i < t.nloc; ++i) s += c[i] * v[i];
  return s;
}

inline Vec3 gradient_at(const BasisTable& t, int q, const Local& c) {
  const Vec3* g = t.grad.data() + static_cast<std::size_t>(q) * t.nloc;
  Vec3 s;
  for (int i = 0; i < t.nloc; ++i) s += c[i] * g[i];
  return s;
}

inline Vec3 vector_at(const BasisTable& t, int q, const Local& c) {
  const Vec3* v = t.vvalue.data() + static_cast<std::size_t>(q) * t.nloc;
  Vec3 s;
  for (int i = 0; i < t.nloc; ++i) s += c[i] * v[i];
  return s;
}

inline Mat3 jacobian_at(const BasisTable& t, int q, const Local& c) {
  const Mat3* j = t.jac.data() + static_cast<std::size_t>(q) * t.nloc;
  Mat3 s;
  for (int i = 0; i < t.nloc; ++i)
    for (int r = 0; r < 3; ++r) s.row[r] += c[i] * j[i].row[r];
  return s;
}

}  // namespace coldplasma::detail
