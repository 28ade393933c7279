#include "coldplasma/fespace.hpp"

#include <cassert>
#include <sstream>

#include "coldplasma/error.hpp"

namespace coldplasma {

namespace {

inline double lagrange1(int a, double t) { return a == 0 ? 1.0 - t : t; }
inline double dlagrange1(int a) { return a == 0 ? -1.0 : 1.0; }

/// The two axes other than d, in increasing order.
inline void other_axes(int d, int& o1, int& o2) {
  o1 = d == 0 ? 1 : 0;
  o2 = d == 2 ? 1 : 2;
}

void q1_gradients(const Vec3& h, const Vec3& r, std::span<Vec3> out) {
  for (int v = 0; v < 8; ++v) {
    const int a = v & 1, b = (v >> 1) & 1, c = (v >> 2) & 1;
    const double lx = lagrange1(a, r.x), ly = lagrange1(b, r.y), lz = lagrange1(c, r.z);
    out[v] = {dlagrange1(a) * ly * lz / h.x, lx * dlagrange1(b) * lz / h.y, lx * ly * dlagrange1(c) / h.z};
  }
}

int local_count(const SpaceKind& k) {
  switch (k.family) {
    case Family::NodalQ:
      return 8;
    case Family::NodalVectorQ:
      return 24;
    case Family::EdgeN:
      return 12;
    case Family::FaceRT:
      return 6;
    case Family::BrokenDG:
      return k.degree == 0 ? 1 : 8;
  }
  return 0;
}

void check_supported(const SpaceKind& k) {
  bool ok = false;
  switch (k.family) {
    case Family::NodalQ:
    case Family::NodalVectorQ:
      ok = k.degree == 1;
      break;
    case Family::EdgeN:
    case Family::FaceRT:
      ok = k.degree == 0;
      break;
    case Family::BrokenDG:
      ok = k.degree == 0 || k.degree == 1;
      break;
  }
  if (!ok) throw InvalidArgument("unsupported finite-element space: " + k.name());
}

struct Numbering {
  Index3 n{};
  Index3 nv{};
  Periodicity periodic{};

  int wrapv(int i, int d) const { return periodic[d] ? i % nv[d] : i; }
  bool on_boundary(int coord, int d) const { return !periodic[d] && (coord == 0 || coord == n[d]); }

  std::size_t vertex(int i, int j, int k) const {
    return static_cast<std::size_t>(wrapv(i, 0)) + static_cast<std::size_t>(nv[0]) * (wrapv(j, 1) + static_cast<std::size_t>(nv[1]) * wrapv(k, 2));
  }
  std::size_t n_vertices() const { return static_cast<std::size_t>(nv[0]) * nv[1] * nv[2]; }

  /// Index extents of the edges (faces) attached to axis d.
  Index3 edge_extent(int d) const {
    Index3 e = nv;
    e[d] = n[d];
    return e;
  }
  Index3 face_extent(int d) const {
    Index3 e = n;
    e[d] = nv[d];
    return e;
  }
  static std::size_t linear(const Index3& c, const Index3& ext) {
    return static_cast<std::size_t>(c[0]) + static_cast<std::size_t>(ext[0]) * (c[1] + static_cast<std::size_t>(ext[1]) * c[2]);
  }
  static std::size_t count(const Index3& ext) { return static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]; }
};

}  // namespace

std::string SpaceKind::name() const {
  std::ostringstream s;
  switch (family) {
    case Family::NodalQ:
      s << "Q" << degree;
      break;
    case Family::NodalVectorQ:
      s << "Q" << degree << "^3";
      break;
    case Family::EdgeN:
      s << "N" << degree;
      break;
    case Family::FaceRT:
      s << "RT" << degree;
      break;
    case Family::BrokenDG:
      s << "DG" << degree;
      break;
  }
  if (constrained) s << (family == Family::BrokenDG ? " (zero mean)" : " (constrained)");
  return s.str();
}

FeSpace::FeSpace(std::shared_ptr<const StructuredHexMesh> mesh, SpaceKind kind) : mesh_(std::move(mesh)), kind_(kind) {
  if (!mesh_) throw InvalidArgument("FeSpace: null mesh");
  check_supported(kind_);
  local_ = local_count(kind_);
  quad_points_ = 3;

  Numbering num;
  num.n = mesh_->cells_per_dim();
  num.periodic = mesh_->periodic();
  for (int d = 0; d < 3; ++d) num.nv[d] = num.periodic[d] ? num.n[d] : num.n[d] + 1;

  // Full numbering with a parallel "removed" mask, compressed afterwards.
  std::size_t n_full = 0;
  std::vector<char> removed;
  const bool constrain = kind_.constrained && kind_.family != Family::BrokenDG;

  switch (kind_.family) {
    case Family::NodalQ:
    case Family::NodalVectorQ: {
      const int comps = kind_.family == Family::NodalQ ? 1 : 3;
      n_full = comps * num.n_vertices();
      removed.assign(n_full, 0);
      if (constrain) {
        for (int k = 0; k < num.nv[2]; ++k)
          for (int j = 0; j < num.nv[1]; ++j)
            for (int i = 0; i < num.nv[0]; ++i) {
              const Index3 c{i, j, k};
              const std::size_t v = num.vertex(i, j, k);
              if (comps == 1) {
                bool b = false;
                for (int d = 0; d < 3; ++d) b = b || num.on_boundary(c[d], d);
                removed[v] = b;
              } else {
                for (int d = 0; d < 3; ++d) removed[d * num.n_vertices() + v] = num.on_boundary(c[d], d);
              }
            }
      }
      break;
    }
    case Family::EdgeN: {
      for (int d = 0; d < 3; ++d) n_full += Numbering::count(num.edge_extent(d));
      removed.assign(n_full, 0);
      if (constrain) {
        std::size_t offset = 0;
        for (int d = 0; d < 3; ++d) {
          const Index3 ext = num.edge_extent(d);
          for (int k = 0; k < ext[2]; ++k)
            for (int j = 0; j < ext[1]; ++j)
              for (int i = 0; i < ext[0]; ++i) {
                const Index3 c{i, j, k};
                bool b = false;
                for (int e = 0; e < 3; ++e)
                  if (e != d) b = b || num.on_boundary(c[e], e);
                removed[offset + Numbering::linear(c, ext)] = b;
              }
          offset += Numbering::count(ext);
        }
      }
      break;
    }
    case Family::FaceRT: {
      for (int d = 0; d < 3; ++d) n_full += Numbering::count(num.face_extent(d));
      removed.assign(n_full, 0);
      if (constrain) {
        std::size_t offset = 0;
        for (int d = 0; d < 3; ++d) {
          const Index3 ext = num.face_extent(d);
          for (int k = 0; k < ext[2]; ++k)
            for (int j = 0; j < ext[1]; ++j)
              for (int i = 0; i < ext[0]; ++i) {
                const Index3 c{i, j, k};
                removed[offset + Numbering::linear(c, ext)] = num.on_boundary(c[d], d);
              }
          offset += Numbering::count(ext);
        }
      }
      break;
    }
    case Family::BrokenDG:
      n_full = mesh_->num_cells() * local_;
      removed.assign(n_full, 0);
      break;
  }

  std::vector<std::int64_t> free_index(n_full, -1);
  for (std::size_t i = 0; i < n_full; ++i)
    if (!removed[i]) free_index[i] = static_cast<std::int64_t>(n_dofs_++);

  const std::size_t ncells = mesh_->num_cells();
  dofs_.assign(ncells * local_, -1);
  for (std::size_t cell = 0; cell < ncells; ++cell) {
    const Index3 c = mesh_->cell_coords(cell);
    std::int64_t* out = dofs_.data() + cell * local_;
    switch (kind_.family) {
      case Family::NodalQ:
      case Family::NodalVectorQ: {
        const int comps = kind_.family == Family::NodalQ ? 1 : 3;
        for (int comp = 0; comp < comps; ++comp)
          for (int v = 0; v < 8; ++v) {
            const std::size_t vid = num.vertex(c[0] + (v & 1), c[1] + ((v >> 1) & 1), c[2] + ((v >> 2) & 1));
            out[comp * 8 + v] = free_index[comp * num.n_vertices() + vid];
          }
        break;
      }
      case Family::EdgeN: {
        std::size_t offset = 0;
        for (int d = 0; d < 3; ++d) {
          int o1, o2;
          other_axes(d, o1, o2);
          const Index3 ext = num.edge_extent(d);
          for (int q = 0; q < 2; ++q)
            for (int p = 0; p < 2; ++p) {
              Index3 e = c;
              e[o1] = num.wrapv(c[o1] + p, o1);
              e[o2] = num.wrapv(c[o2] + q, o2);
              out[4 * d + p + 2 * q] = free_index[offset + Numbering::linear(e, ext)];
            }
          offset += Numbering::count(ext);
        }
        break;
      }
      case Family::FaceRT: {
        std::size_t offset = 0;
        for (int d = 0; d < 3; ++d) {
          const Index3 ext = num.face_extent(d);
          for (int a = 0; a < 2; ++a) {
            Index3 f = c;
            f[d] = num.wrapv(c[d] + a, d);
            out[2 * d + a] = free_index[offset + Numbering::linear(f, ext)];
          }
          offset += Numbering::count(ext);
        }
        break;
      }
      case Family::BrokenDG:
        for (int i = 0; i < local_; ++i) out[i] = free_index[cell * local_ + i];
        break;
    }
  }
}

void FeSpace::values(const Vec3& r, std::span<double> out) const {
  if (is_vector()) throw InvalidArgument("FeSpace::values: scalar values requested from a vector space");
  if (kind_.family == Family::BrokenDG && kind_.degree == 0) {
    out[0] = 1.0;
    return;
  }
  for (int v = 0; v < 8; ++v)
    out[v] = lagrange1(v & 1, r.x) * lagrange1((v >> 1) & 1, r.y) * lagrange1((v >> 2) & 1, r.z);
}

void FeSpace::gradients(const Vec3& r, std::span<Vec3> out) const {
  if (is_vector()) throw InvalidArgument("FeSpace::gradients: gradient requested from a vector space");
  if (kind_.family == Family::BrokenDG && kind_.degree == 0) {
    out[0] = Vec3{};
    return;
  }
  q1_gradients(mesh_->cell_size(), r, out);
}

void FeSpace::values(const Vec3& r, std::span<Vec3> out) const {
  const Vec3& h = mesh_->cell_size();
  switch (kind_.family) {
    case Family::NodalVectorQ: {
      for (int v = 0; v < 8; ++v) {
        const double phi = lagrange1(v & 1, r.x) * lagrange1((v >> 1) & 1, r.y) * lagrange1((v >> 2) & 1, r.z);
        for (int comp = 0; comp < 3; ++comp) {
          Vec3 e;
          e[comp] = phi;
          out[comp * 8 + v] = e;
        }
      }
      return;
    }
    case Family::EdgeN: {
      for (int d = 0; d < 3; ++d) {
        int o1, o2;
        other_axes(d, o1, o2);
        for (int q = 0; q < 2; ++q)
          for (int p = 0; p < 2; ++p) {
            Vec3 e;
            e[d] = lagrange1(p, r[o1]) * lagrange1(q, r[o2]) / h[d];
            out[4 * d + p + 2 * q] = e;
          }
      }
      return;
    }
    case Family::FaceRT: {
      for (int d = 0; d < 3; ++d) {
        int o1, o2;
        other_axes(d, o1, o2);
        for (int a = 0; a < 2; ++a) {
          Vec3 e;
          e[d] = lagrange1(a, r[d]) / (h[o1] * h[o2]);
          out[2 * d + a] = e;
        }
      }
      return;
    }
    default:
      throw InvalidArgument("FeSpace::values: vector values requested from a scalar space");
  }
}

void FeSpace::jacobians(const Vec3& r, std::span<Mat3> out) const {
  const Vec3& h = mesh_->cell_size();
  switch (kind_.family) {
    case Family::NodalVectorQ: {
      std::array<Vec3, 8> g;
      q1_gradients(h, r, g);
      for (int comp = 0; comp < 3; ++comp)
        for (int v = 0; v < 8; ++v) {
          Mat3 m;
          m.row[comp] = g[v];
          out[comp * 8 + v] = m;
        }
      return;
    }
    case Family::EdgeN: {
      for (int d = 0; d < 3; ++d) {
        int o1, o2;
        other_axes(d, o1, o2);
        for (int q = 0; q < 2; ++q)
          for (int p = 0; p < 2; ++p) {
            Mat3 m;
            m.row[d][o1] = dlagrange1(p) * lagrange1(q, r[o2]) / (h[d] * h[o1]);
            m.row[d][o2] = lagrange1(p, r[o1]) * dlagrange1(q) / (h[d] * h[o2]);
            out[4 * d + p + 2 * q] = m;
          }
      }
      return;
    }
    case Family::FaceRT: {
      for (int d = 0; d < 3; ++d) {
        int o1, o2;
        other_axes(d, o1, o2);
        for (int a = 0; a < 2; ++a) {
          Mat3 m;
          m.row[d][d] = dlagrange1(a) / (h[o1] * h[o2] * h[d]);
          out[2 * d + a] = m;
        }
      }
      return;
    }
    default:
      throw InvalidArgument("FeSpace::jacobians: Jacobian requested from a scalar space");
  }
}

void FeSpace::curls(const Vec3& r, std::span<Vec3> out) const {
  if (kind_.family != Family::EdgeN) throw InvalidArgument("FeSpace::curls: curl is only defined for edge elements");
  std::array<Mat3, 12> jac;
  jacobians(r, jac);
  for (int i = 0; i < 12; ++i) {
    const Mat3& j = jac[i];
    out[i] = {j.row[2][1] - j.row[1][2], j.row[0][2] - j.row[2][0], j.row[1][0] - j.row[0][1]};
  }
}

void FeSpace::divergences(const Vec3& r, std::span<double> out) const {
  if (kind_.family != Family::FaceRT && kind_.family != Family::NodalVectorQ)
    throw InvalidArgument("FeSpace::divergences: divergence requested from an incompatible space");
  std::vector<Mat3> jac(local_);
  jacobians(r, jac);
  for (int i = 0; i < local_; ++i) out[i] = jac[i].row[0][0] + jac[i].row[1][1] + jac[i].row[2][2];
}

BasisEvaluation eval_basis(const FeSpace& space, const Vec3& ref, Derivative derivative) {
  BasisEvaluation out;
  const int n = space.dofs_per_cell();
  if (space.is_vector()) {
    out.vector.resize(n);
    space.values(ref, out.vector);
  } else {
    out.scalar.resize(n);
    space.values(ref, out.scalar);
  }
  switch (derivative) {
    case Derivative::None:
      break;
    case Derivative::Gradient:
      if (space.is_vector()) throw InvalidArgument("eval_basis: gradient of a vector family");
      out.vector_derivative.resize(n);
      space.gradients(ref, out.vector_derivative);
      break;
    case Derivative::Curl:
      out.vector_derivative.resize(n);
      space.curls(ref, out.vector_derivative);
      break;
    case Derivative::Divergence:
      out.scalar_derivative.resize(n);
      space.divergences(ref, out.scalar_derivative);
      break;
  }
  return out;
}

BasisTable tabulate(const FeSpace& space, const QuadratureRule& rule) {
  BasisTable t;
  t.nq = static_cast<int>(rule.size());
  t.nloc = space.dofs_per_cell();
  const double vol = space.mesh().cell_volume();
  t.weights.resize(t.nq);
  const std::size_t n = static_cast<std::size_t>(t.nq) * t.nloc;
  const Family f = space.kind().family;
  if (space.is_vector()) {
    t.vvalue.resize(n);
    t.jac.resize(n);
    if (f == Family::EdgeN) t.grad.resize(n);
    if (f != Family::EdgeN) t.div.resize(n);
  } else {
    t.value.resize(n);
    t.grad.resize(n);
  }
  for (int q = 0; q < t.nq; ++q) {
    t.weights[q] = rule.weights[q] * vol;
    const Vec3& r = rule.points[q];
    const std::size_t off = static_cast<std::size_t>(q) * t.nloc;
    if (space.is_vector()) {
      space.values(r, std::span<Vec3>(t.vvalue.data() + off, t.nloc));
      space.jacobians(r, std::span<Mat3>(t.jac.data() + off, t.nloc));
      if (f == Family::EdgeN) space.curls(r, std::span<Vec3>(t.grad.data() + off, t.nloc));
      else space.divergences(r, std::span<double>(t.div.data() + off, t.nloc));
    } else {
      space.values(r, std::span<double>(t.value.data() + off, t.nloc));
      space.gradients(r, std::span<Vec3>(t.grad.data() + off, t.nloc));
    }
  }
  return t;
}

SparseMatrix mass_matrix(const FeSpace& space) {
  const BasisTable t = tabulate(space, hex_rule(space.quadrature_points()));
  const int nl = t.nloc;
  std::vector<double> local(static_cast<std::size_t>(nl) * nl);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j) {
      double s = 0.0;
      for (int q = 0; q < t.nq; ++q) {
        const std::size_t off = static_cast<std::size_t>(q) * nl;
        s += t.weights[q] * (space.is_vector() ? dot(t.vvalue[off + i], t.vvalue[off + j]) : t.value[off + i] * t.value[off + j]);
      }
      local[static_cast<std::size_t>(i) * nl + j] = s;
    }
  std::vector<Triplet> trip;
  trip.reserve(space.mesh().num_cells() * nl * nl);
  for (std::size_t cell = 0; cell < space.mesh().num_cells(); ++cell) {
    const auto dofs = space.cell_dofs(cell);
    for (int i = 0; i < nl; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < nl; ++j) {
        if (dofs[j] < 0) continue;
        const double v = local[static_cast<std::size_t>(i) * nl + j];
        if (v != 0.0) trip.push_back({static_cast<std::size_t>(dofs[i]), static_cast<std::size_t>(dofs[j]), v});
      }
    }
  }
  return SparseMatrix(space.n_dofs(), space.n_dofs(), std::move(trip));
}

namespace {

template <class F>
DofVector assemble_load_impl(const FeSpace& space, const F& f, int quad_points) {
  const QuadratureRule rule = hex_rule(quad_points > 0 ? quad_points : space.quadrature_points());
  const BasisTable t = tabulate(space, rule);
  const StructuredHexMesh& mesh = space.mesh();
  DofVector out(space.n_dofs(), 0.0);
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto dofs = space.cell_dofs(cell);
    for (int q = 0; q < t.nq; ++q) {
      const auto fx = f(mesh.to_physical({cell, rule.points[q]}));
      const std::size_t off = static_cast<std::size_t>(q) * t.nloc;
      for (int i = 0; i < t.nloc; ++i) {
        if (dofs[i] < 0) continue;
        if constexpr (std::is_same_v<std::decay_t<decltype(fx)>, Vec3>) {
          out[dofs[i]] += t.weights[q] * dot(fx, t.vvalue[off + i]);
        } else {
          out[dofs[i]] += t.weights[q] * fx * t.value[off + i];
        }
      }
    }
  }
  return out;
}

}  // namespace

DofVector assemble_load(const FeSpace& space, const ScalarFunction& f, int quad_points) {
  if (space.is_vector()) throw InvalidArgument("assemble_load: scalar function on a vector space");
  return assemble_load_impl(space, f, quad_points);
}

DofVector assemble_load(const FeSpace& space, const VectorFunction& f, int quad_points) {
  if (!space.is_vector()) throw InvalidArgument("assemble_load: vector function on a scalar space");
  return assemble_load_impl(space, f, quad_points);
}

DofVector l2_project(const FeSpace& space, const ScalarFunction& f, const CgConfig& config) {
  return cg_solve(mass_matrix(space), assemble_load(space, f), config);
}

DofVector l2_project(const FeSpace& space, const VectorFunction& f, const CgConfig& config) {
  return cg_solve(mass_matrix(space), assemble_load(space, f), config);
}

double eval_scalar(const FeSpace& space, std::span<const double> coeffs, const CellRef& at) {
  std::array<double, 8> v{};
  space.values(at.ref, std::span<double>(v.data(), space.dofs_per_cell()));
  const auto dofs = space.cell_dofs(at.cell);
  double s = 0.0;
  for (int i = 0; i < space.dofs_per_cell(); ++i)
    if (dofs[i] >= 0) s += coeffs[dofs[i]] * v[i];
  return s;
}

Vec3 eval_vector(const FeSpace& space, std::span<const double> coeffs, const CellRef& at) {
  std::array<Vec3, 24> v{};
  space.values(at.ref, std::span<Vec3>(v.data(), space.dofs_per_cell()));
  const auto dofs = space.cell_dofs(at.cell);
  Vec3 s;
  for (int i = 0; i < space.dofs_per_cell(); ++i)
    if (dofs[i] >= 0) s += coeffs[dofs[i]] * v[i];
  return s;
}

FieldValue eval_field(const FeSpace& space, std::span<const double> coeffs, const Vec3& x) {
  const auto at = space.mesh().locate_point(x);
  if (!at) {
    std::ostringstream msg;
    msg << "eval_field: point (" << x.x << ", " << x.y << ", " << x.z << ") is outside the domain";
    throw InvalidArgument(msg.str());
  }
  if (space.is_vector()) return eval_vector(space, coeffs, *at);
  return eval_scalar(space, coeffs, *at);
}

namespace {

template <class F>
double l2_error_impl(const FeSpace& space, std::span<const double> coeffs, const F& f, int quad_points) {
  const QuadratureRule rule = hex_rule(quad_points);
  const StructuredHexMesh& mesh = space.mesh();
  const double vol = mesh.cell_volume();
  double sum = 0.0;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const CellRef at{cell, rule.points[q]};
      const auto exact = f(mesh.to_physical(at));
      if constexpr (std::is_same_v<std::decay_t<decltype(exact)>, Vec3>) {
        const Vec3 diff = eval_vector(space, coeffs, at) - exact;
        sum += rule.weights[q] * vol * dot(diff, diff);
      } else {
        const double diff = eval_scalar(space, coeffs, at) - exact;
        sum += rule.weights[q] * vol * diff * diff;
      }
    }
  }
  return std::sqrt(sum);
}

}  // namespace

double l2_error(const FeSpace& space, std::span<const double> coeffs, const ScalarFunction& f, int quad_points) {
  return l2_error_impl(space, coeffs, f, quad_points);
}

double l2_error(const FeSpace& space, std::span<const double> coeffs, const VectorFunction& f, int quad_points) {
  return l2_error_impl(space, coeffs, f, quad_points);
}

}  // namespace coldplasma
