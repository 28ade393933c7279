#include "coldplasma/particles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "coldplasma/error.hpp"

namespace coldplasma {

double ParticleSet::active_weight() const {
  double s = 0.0;
  for (std::size_t p = 0; p < size(); ++p)
    if (active[p]) s += w[p];
  return s;
}

SegmentedPath segment_and_build_D(const StructuredHexMesh& mesh, const Vec3& x_old, const Vec3& x_new) {
  SegmentedPath path;
  const Vec3 total = x_new - x_old;
  Vec3 end = x_new;
  if (!mesh.contains(x_new)) {
    double t_exit = 1.0;
    for (int d = 0; d < 3; ++d) {
      if (mesh.periodic(d) || total[d] == 0.0) continue;
      if (x_new[d] > mesh.upper()[d]) t_exit = std::min(t_exit, (mesh.upper()[d] - x_old[d]) / total[d]);
      if (x_new[d] < mesh.lower()[d]) t_exit = std::min(t_exit, (mesh.lower()[d] - x_old[d]) / total[d]);
    }
    end = x_old + std::max(t_exit, 0.0) * total;
    path.exits = true;
  }
  path.points = mesh.intersect_segment_with_faces(x_old, end);
  const std::size_t s = path.points.size() - 1;
  path.D.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    const Vec3 step = path.points[i + 1] - path.points[i];
    for (int d = 0; d < 3; ++d) path.D[i][d] = total[d] == 0.0 ? 1.0 / static_cast<double>(s) : step[d] / total[d];
  }
  return path;
}

double push_position_explicit(ParticleSet& set, const StructuredHexMesh& mesh, const PhysConstants& pc, double dt) {
  double removed = 0.0;
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (!set.active[p]) continue;
    const Vec3 x = set.X[p] + dt * particle_velocity(set.U[p], pc.m, pc.c);
    if (!mesh.contains(x)) {
      set.active[p] = 0;
      removed += set.w[p];
      set.X[p] = x;
      continue;
    }
    set.X[p] = mesh.wrap(x);
  }
  return removed;
}

Vec3 eval_vector_at_point(const FeSpace& space, std::span<const double> coeffs, const Vec3& x) {
  const auto at = space.mesh().locate_point(x);
  if (!at) return {};
  return eval_vector(space, coeffs, *at);
}

void push_momentum_explicit(ParticleSet& set, const FeSpace& e_space, std::span<const double> e, const FeSpace& b_space,
                            std::span<const double> b, const PhysConstants& pc, double dt) {
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (!set.active[p]) continue;
    const Vec3 ef = eval_vector_at_point(e_space, e, set.X[p]);
    const Vec3 bf = eval_vector_at_point(b_space, b, set.X[p]);
    const Vec3 u = set.U[p];
    const double g = gamma(u, pc.m, pc.c);
    set.U[p] = u + dt * pc.e * (ef + cross(u, bf) / (pc.c * pc.m * g));
  }
}

DofVector deposit_point_current(const ParticleSet& set, const FeSpace& edge_space, const PhysConstants& pc) {
  DofVector out(edge_space.n_dofs(), 0.0);
  std::array<Vec3, 12> nu{};
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (!set.active[p]) continue;
    const auto at = edge_space.mesh().locate_point(set.X[p]);
    if (!at) continue;
    const Vec3 j = set.w[p] / gamma(set.U[p], pc.m, pc.c) * set.U[p];
    edge_space.values(at->ref, nu);
    const auto dofs = edge_space.cell_dofs(at->cell);
    for (int i = 0; i < 12; ++i)
      if (dofs[i] >= 0) out[dofs[i]] += dot(j, nu[i]);
  }
  return out;
}

DofVector deposit_point_charge(const ParticleSet& set, const FeSpace& scalar_space) {
  DofVector out(scalar_space.n_dofs(), 0.0);
  std::vector<double> phi(scalar_space.dofs_per_cell());
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (!set.active[p]) continue;
    const auto at = scalar_space.mesh().locate_point(set.X[p]);
    if (!at) continue;
    scalar_space.values(at->ref, phi);
    const auto dofs = scalar_space.cell_dofs(at->cell);
    for (std::size_t i = 0; i < phi.size(); ++i)
      if (dofs[i] >= 0) out[dofs[i]] += set.w[p] * phi[i];
  }
  return out;
}

namespace {

Vec3 reference_coords(const Vec3& p, const Vec3& origin, const Vec3& h) {
  Vec3 r;
  for (int d = 0; d < 3; ++d) r[d] = std::clamp((p[d] - origin[d]) / h[d], 0.0, 1.0);
  return r;
}

}  // namespace

DofVector segmented_current(const ParticleSet& set, const std::vector<SegmentedPath>& paths, const FeSpace& edge_space,
                            double dt, const GaussRule1D& xi_rule) {
  if (paths.size() != set.size()) throw InvalidArgument("segmented_current: one path per particle required");
  const StructuredHexMesh& mesh = edge_space.mesh();
  const Vec3& h = mesh.cell_size();
  DofVector out(edge_space.n_dofs(), 0.0);
  std::array<Vec3, 12> nu{};
  std::array<double, 12> acc{};
  for (std::size_t p = 0; p < set.size(); ++p) {
    if (!set.active[p]) continue;
    const SegmentedPath& path = paths[p];
    for (std::size_t s = 0; s < path.segments(); ++s) {
      const Vec3& a = path.points[s];
      const Vec3& b = path.points[s + 1];
      const Vec3 step = b - a;
      if (step == Vec3{}) continue;
      const auto cell = mesh.segment_cell(a, b);
      acc.fill(0.0);
      for (std::size_t q = 0; q < xi_rule.points.size(); ++q) {
        edge_space.values(reference_coords(a + xi_rule.points[q] * step, cell.origin, h), nu);
        for (int i = 0; i < 12; ++i) acc[i] += xi_rule.weights[q] * dot(step, nu[i]);
      }
      const auto dofs = edge_space.cell_dofs(cell.cell);
      for (int i = 0; i < 12; ++i)
        if (dofs[i] >= 0) out[dofs[i]] += set.w[p] * acc[i] / dt;
    }
  }
  return out;
}

Vec3 segment_average(const FeSpace& space, std::span<const double> coeffs, const Vec3& a, const Vec3& b,
                     const GaussRule1D& xi_rule) {
  const StructuredHexMesh& mesh = space.mesh();
  const auto cell = mesh.segment_cell(a, b);
  const Vec3 step = b - a;
  Vec3 sum;
  for (std::size_t q = 0; q < xi_rule.points.size(); ++q) {
    const Vec3 r = reference_coords(a + xi_rule.points[q] * step, cell.origin, mesh.cell_size());
    sum += xi_rule.weights[q] * eval_vector(space, coeffs, {cell.cell, r});
  }
  return sum;
}

ParticleSet sample_gaussian_ball(std::size_t n, double cutoff, std::uint64_t seed, double weight) {
  if (n < 1) throw InvalidArgument("sample_gaussian_ball: n must be >= 1");
  std::mt19937_64 rng(seed);
  // exp(-10 x^2) is a normal density with variance 1/20 in each coordinate.
  std::normal_distribution<double> normal(0.0, std::sqrt(1.0 / 20.0));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  ParticleSet set;
  for (std::size_t p = 0; p < n; ++p) {
    Vec3 x;
    for (int d = 0; d < 3; ++d) {
      double v;
      do {
        v = normal(rng);
      } while (std::fabs(v) >= cutoff);
      x[d] = v;
    }
    const Vec3 u{uniform(rng), uniform(rng), uniform(rng)};
    set.add(x, u, weight);
  }
  return set;
}

}  // namespace coldplasma
