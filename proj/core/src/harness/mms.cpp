#include "coldplasma/harness/mms.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace coldplasma::harness {

namespace {

constexpr double kPi = std::numbers::pi;

/// Forward-mode dual number carrying d/dt, d/dx, d/dy, d/dz.
struct Dual {
  double v = 0.0;
  std::array<double, 4> d{};
};

Dual constant(double v) { return {v, {}}; }
Dual variable(double v, int slot) {
  Dual r{v, {}};
  r.d[slot] = 1.0;
  return r;
}

Dual operator+(const Dual& a, const Dual& b) {
  Dual r{a.v + b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}
Dual operator-(const Dual& a, const Dual& b) {
  Dual r{a.v - b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}
Dual operator*(const Dual& a, const Dual& b) {
  Dual r{a.v * b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
Dual operator/(const Dual& a, const Dual& b) {
  Dual r{a.v / b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v);
  return r;
}
Dual operator*(double s, const Dual& a) {
  Dual r{s * a.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = s * a.d[i];
  return r;
}
Dual sin(const Dual& a) {
  Dual r{std::sin(a.v), {}};
  for (int i = 0; i < 4; ++i) r.d[i] = std::cos(a.v) * a.d[i];
  return r;
}
Dual cos(const Dual& a) {
  Dual r{std::cos(a.v), {}};
  for (int i = 0; i < 4; ++i) r.d[i] = -std::sin(a.v) * a.d[i];
  return r;
}
Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  Dual r{s, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = 0.5 * a.d[i] / s;
  return r;
}

using DVec = std::array<Dual, 3>;

struct DualFields {
  DVec E, B, M;
  Dual rho;
};

DualFields eval(const Dual& t, const Dual& x, const Dual& y, const Dual& z, const PhysConstants& pc) {
  const Dual sx = sin(kPi * x), sy = sin(kPi * y), sz = sin(kPi * z);
  const Dual cx = cos(kPi * x), cy = cos(kPi * y), cz = cos(kPi * z);
  const Dual st = sin(t), ct = cos(t);
  DualFields f;
  f.E = {constant(-1.0) * st * cx * sy * sz, st * sx * cy * sz, st * sx * sy * cz};
  f.B = {-0.5 * (ct * sx * cy * cz), 0.25 * (ct * cx * sy * cz), 0.25 * (ct * cx * cy * sz)};
  f.rho = constant(2.0) - (pc.m / (4.0 * pc.e)) * (st * sx * sy * sz);
  f.M = {st * sx * cy * cz, st * cx * sy * cz, st * cx * cy * sz};
  return f;
}

DualFields eval_at(double t, const Vec3& p, const PhysConstants& pc) {
  return eval(variable(t, 0), variable(p.x, 1), variable(p.y, 2), variable(p.z, 3), pc);
}

Vec3 value(const DVec& v) { return {v[0].v, v[1].v, v[2].v}; }
Vec3 dt_of(const DVec& v) { return {v[0].d[0], v[1].d[0], v[2].d[0]}; }
Vec3 curl_of(const DVec& v) {
  return {v[2].d[2] - v[1].d[3], v[0].d[3] - v[2].d[1], v[1].d[1] - v[0].d[2]};
}
double div_of(const DVec& v) { return v[0].d[1] + v[1].d[2] + v[2].d[3]; }

}  // namespace

MmsValues mms_fields(double t, const Vec3& x, const PhysConstants& pc) {
  const DualFields f = eval_at(t, x, pc);
  return {value(f.E), value(f.B), f.rho.v, value(f.M)};
}

MmsSources mms_sources(double t, const Vec3& x, const PhysConstants& pc) {
  const DualFields f = eval_at(t, x, pc);
  const Dual c2 = constant(pc.c * pc.c);
  const Dual mm = f.M[0] * f.M[0] + f.M[1] * f.M[1] + f.M[2] * f.M[2];
  const Dual g = sqrt(constant(1.0) + mm / (f.rho * f.rho * c2));
  const DVec flux{f.M[0] / g, f.M[1] / g, f.M[2] / g};
  const DVec w{flux[0] / f.rho, flux[1] / f.rho, flux[2] / f.rho};

  MmsSources s;
  s.rho = f.rho.d[0] + div_of(flux);

  const Vec3 wv = value(w);
  const Vec3 lorentz = (pc.e / pc.m) * f.rho.v * (value(f.E) + cross(wv, value(f.B)) / pc.c);
  for (int i = 0; i < 3; ++i) {
    double div = 0.0;
    for (int j = 0; j < 3; ++j) div += (f.M[i] * w[j]).d[1 + j];
    s.M[i] = f.M[i].d[0] + div - lorentz[i];
  }

  s.E = dt_of(f.E) - pc.c * curl_of(f.B) + (4.0 * kPi * pc.e / pc.m) * value(flux);
  s.B = dt_of(f.B) + pc.c * curl_of(f.E);
  return s;
}

Vec3 mms_vector_potential(const Vec3& x) {
  const double sx = std::sin(kPi * x.x), sy = std::sin(kPi * x.y), sz = std::sin(kPi * x.z);
  const double cy = std::cos(kPi * x.y), cz = std::cos(kPi * x.z);
  return {0.0, sx * cy * sz / (4.0 * kPi), -sx * sy * cz / (4.0 * kPi)};
}

SourceProvider mms_source_provider(const PhysConstants& pc) {
  return [pc](double t) {
    Sources s;
    s.rho = [pc, t](const Vec3& x) { return mms_sources(t, x, pc).rho; };
    s.M = [pc, t](const Vec3& x) { return mms_sources(t, x, pc).M; };
    s.E = [pc, t](const Vec3& x) { return mms_sources(t, x, pc).E; };
    s.B = [pc, t](const Vec3& x) { return mms_sources(t, x, pc).B; };
    return s;
  };
}

DofVector edge_interpolate(const FeSpace& edge_space, const VectorFunction& a, int n) {
  const StructuredHexMesh& mesh = edge_space.mesh();
  const GaussRule1D rule = gauss_legendre(n);
  const Vec3& h = mesh.cell_size();
  DofVector out(edge_space.n_dofs(), 0.0);
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const auto dofs = edge_space.cell_dofs(cell);
    const Vec3 origin = mesh.cell_origin(cell);
    for (int d = 0; d < 3; ++d) {
      const int o1 = d == 0 ? 1 : 0;
      const int o2 = d == 2 ? 1 : 2;
      for (int q = 0; q < 2; ++q)
        for (int p = 0; p < 2; ++p) {
          const std::int64_t g = dofs[4 * d + p + 2 * q];
          if (g < 0) continue;
          Vec3 start = origin;
          start[o1] += p * h[o1];
          start[o2] += q * h[o2];
          double sum = 0.0;
          for (std::size_t k = 0; k < rule.points.size(); ++k) {
            Vec3 pt = start;
            pt[d] += rule.points[k] * h[d];
            sum += rule.weights[k] * a(pt)[d];
          }
          out[g] = sum * h[d];
        }
    }
  }
  return out;
}

}  // namespace coldplasma::harness
