#include "coldplasma/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coldplasma/error.hpp"

namespace coldplasma {

namespace {

constexpr double kLocateTol = 1e-12;

int positive_mod(long long i, int n) {
  const long long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

StructuredHexMesh::StructuredHexMesh(Vec3 lower, Vec3 upper, Index3 cells, Periodicity periodic)
    : lower_(lower), upper_(upper), n_(cells), periodic_(periodic) {
  for (int d = 0; d < 3; ++d) {
    if (!(upper[d] > lower[d])) {
      std::ostringstream msg;
      msg << "degenerate mesh extent along axis " << d << ": [" << lower[d] << ", " << upper[d] << "]";
      throw InvalidArgument(msg.str());
    }
    if (cells[d] < 1) {
      std::ostringstream msg;
      msg << "cells_per_dim[" << d << "] = " << cells[d] << " must be >= 1";
      throw InvalidArgument(msg.str());
    }
    h_[d] = (upper[d] - lower[d]) / cells[d];
  }

  for (int axis = 0; axis < 3; ++axis) {
    const int planes = periodic_[axis] ? n_[axis] : n_[axis] - 1;
    for (int k = 0; k < n_[2]; ++k) {
      for (int j = 0; j < n_[1]; ++j) {
        for (int i = 0; i < n_[0]; ++i) {
          Index3 c{i, j, k};
          if (c[axis] >= planes) continue;
          Index3 up = c;
          up[axis] = (c[axis] + 1) % n_[axis];
          faces_.push_back({axis, cell_index(c), cell_index(up), c[axis] + 1 == n_[axis]});
        }
      }
    }
  }
}

double StructuredHexMesh::min_cell_size() const { return std::min({h_.x, h_.y, h_.z}); }

double StructuredHexMesh::domain_volume() const {
  return (upper_.x - lower_.x) * (upper_.y - lower_.y) * (upper_.z - lower_.z);
}

Index3 StructuredHexMesh::cell_coords(std::size_t cell) const {
  const auto nx = static_cast<std::size_t>(n_[0]);
  const auto ny = static_cast<std::size_t>(n_[1]);
  return {static_cast<int>(cell % nx), static_cast<int>((cell / nx) % ny), static_cast<int>(cell / (nx * ny))};
}

Vec3 StructuredHexMesh::cell_origin(std::size_t cell) const {
  const Index3 c = cell_coords(cell);
  return {lower_.x + c[0] * h_.x, lower_.y + c[1] * h_.y, lower_.z + c[2] * h_.z};
}

Vec3 StructuredHexMesh::cell_center(std::size_t cell) const { return cell_origin(cell) + 0.5 * h_; }

Vec3 StructuredHexMesh::to_physical(const CellRef& r) const { return cell_origin(r.cell) + hadamard(r.ref, h_); }

Vec3 StructuredHexMesh::wrap(Vec3 x) const {
  for (int d = 0; d < 3; ++d) {
    if (!periodic_[d]) continue;
    const double len = upper_[d] - lower_[d];
    double s = std::fmod(x[d] - lower_[d], len);
    if (s < 0.0) s += len;
    if (s >= len) s = 0.0;
    x[d] = lower_[d] + s;
  }
  return x;
}

bool StructuredHexMesh::contains(const Vec3& x) const {
  for (int d = 0; d < 3; ++d) {
    if (periodic_[d]) continue;
    const double tol = kLocateTol * (upper_[d] - lower_[d]);
    if (x[d] < lower_[d] - tol || x[d] > upper_[d] + tol) return false;
  }
  return true;
}

std::optional<CellRef> StructuredHexMesh::locate_point(const Vec3& x_in) const {
  if (!contains(x_in)) return std::nullopt;
  const Vec3 x = wrap(x_in);
  Index3 c{};
  Vec3 ref;
  for (int d = 0; d < 3; ++d) {
    const double u = (x[d] - lower_[d]) / h_[d];
    int idx = static_cast<int>(std::ceil(u)) - 1;
    idx = std::clamp(idx, 0, n_[d] - 1);
    c[d] = idx;
    ref[d] = std::clamp(u - idx, 0.0, 1.0);
  }
  return CellRef{cell_index(c), ref};
}

std::vector<Vec3> StructuredHexMesh::intersect_segment_with_faces(const Vec3& a, const Vec3& b) const {
  std::vector<double> ts;
  const Vec3 delta = b - a;
  for (int d = 0; d < 3; ++d) {
    if (delta[d] == 0.0) continue;
    const double ua = (a[d] - lower_[d]) / h_[d];
    const double ub = (b[d] - lower_[d]) / h_[d];
    const double lo = std::min(ua, ub);
    const double hi = std::max(ua, ub);
    for (double p = std::floor(lo) + 1.0; p < hi; p += 1.0) {
      const double t = (lower_[d] + p * h_[d] - a[d]) / delta[d];
      if (t > 1e-14 && t < 1.0 - 1e-14) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());

  std::vector<Vec3> points{a};
  double last = 0.0;
  for (double t : ts) {
    if (t - last <= 1e-13) continue;
    points.push_back(a + t * delta);
    last = t;
  }
  if (1.0 - last <= 1e-13 && points.size() > 1) points.pop_back();
  points.push_back(b);
  return points;
}

StructuredHexMesh::SegmentCell StructuredHexMesh::segment_cell(const Vec3& a, const Vec3& b) const {
  const Vec3 mid = 0.5 * (a + b);
  Index3 c{};
  SegmentCell out;
  for (int d = 0; d < 3; ++d) {
    const double u = (mid[d] - lower_[d]) / h_[d];
    long long idx = static_cast<long long>(std::ceil(u)) - 1;
    if (!periodic_[d]) idx = std::clamp<long long>(idx, 0, n_[d] - 1);
    out.origin[d] = lower_[d] + static_cast<double>(idx) * h_[d];
    c[d] = positive_mod(idx, n_[d]);
  }
  out.cell = cell_index(c);
  return out;
}

}  // namespace coldplasma
