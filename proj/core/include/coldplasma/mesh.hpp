#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "coldplasma/vec3.hpp"

namespace coldplasma {

using Index3 = std::array<int, 3>;
using Periodicity = std::array<bool, 3>;

/// A cell and reference coordinates in [0,1]^3 inside it.
struct CellRef {
  std::size_t cell = 0;
  Vec3 ref;
};

/// Face between two cells. The normal is the +axis direction, pointing from
/// `minus` (side 1) into `plus` (side 2).
struct Face {
  int axis = 0;
  std::size_t minus = 0;
  std::size_t plus = 0;
  bool periodic = false;
};

/// Uniform axis-aligned hexahedral grid on a box.
class StructuredHexMesh {
 public:
  StructuredHexMesh(Vec3 lower, Vec3 upper, Index3 cells, Periodicity periodic = {false, false, false});

  const Vec3& lower() const { return lower_; }
  const Vec3& upper() const { return upper_; }
  const Index3& cells_per_dim() const { return n_; }
  const Periodicity& periodic() const { return periodic_; }
  bool periodic(int axis) const { return periodic_[axis]; }
  const Vec3& cell_size() const { return h_; }
  double min_cell_size() const;
  double cell_volume() const { return h_.x * h_.y * h_.z; }
  double domain_volume() const;
  std::size_t num_cells() const { return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]; }

  std::size_t cell_index(const Index3& c) const {
    return static_cast<std::size_t>(c[0]) + static_cast<std::size_t>(n_[0]) * (c[1] + static_cast<std::size_t>(n_[1]) * c[2]);
  }
  Index3 cell_coords(std::size_t cell) const;
  Vec3 cell_origin(std::size_t cell) const;
  Vec3 cell_center(std::size_t cell) const;
  Vec3 to_physical(const CellRef& r) const;

  /// Wraps periodic coordinates into [lower, upper); other coordinates pass through.
  Vec3 wrap(Vec3 x) const;
  /// True if the wrapped point lies in the closed box (up to a small tolerance).
  bool contains(const Vec3& x) const;
  /// Cell containing x; points on shared faces go to the lower-index cell.
  std::optional<CellRef> locate_point(const Vec3& x) const;

  /// Interior faces, including the identified faces of periodic directions.
  const std::vector<Face>& interior_faces() const { return faces_; }

  /// Ordered crossing points A_0 = a, ..., A_s = b of the straight segment
  /// [a, b] with the grid planes. Coordinates are unwrapped: under
  /// periodicity b may lie outside the box.
  std::vector<Vec3> intersect_segment_with_faces(const Vec3& a, const Vec3& b) const;

  /// Cell holding the sub-segment [a, b] (which lies in one cell of the
  /// periodic cover) together with the unwrapped origin of that cell copy, so
  /// that any point p on the sub-segment has reference coordinates
  /// (p - origin) / h.
  struct SegmentCell {
    std::size_t cell = 0;
    Vec3 origin;
  };
  SegmentCell segment_cell(const Vec3& a, const Vec3& b) const;

 private:
  Vec3 lower_;
  Vec3 upper_;
  Index3 n_;
  Periodicity periodic_;
  Vec3 h_;
  std::vector<Face> faces_;
};

}  // namespace coldplasma
