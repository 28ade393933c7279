#include "coldplasma/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "coldplasma/harness/io.hpp"
#include "coldplasma/harness/mms.hpp"

namespace coldplasma::harness {

namespace {

constexpr double kPi = std::numbers::pi;

std::string join(const std::string& dir, const std::string& name) { return dir + "/" + name; }

void note(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n' << std::flush;
}

double max_abs(std::span<const double> v) { return v.empty() ? 0.0 : norm_inf(v); }

}  // namespace

std::shared_ptr<const StructuredHexMesh> make_mesh(const RunConfig& cfg) {
  return std::make_shared<const StructuredHexMesh>(cfg.lower, cfg.upper, cfg.cells, cfg.periodic);
}

std::shared_ptr<const StructuredHexMesh> make_mesh(const RunConfig& cfg, int n) {
  return std::make_shared<const StructuredHexMesh>(cfg.lower, cfg.upper, Index3{n, n, n}, cfg.periodic);
}

double fit_order(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_order: need at least two matching samples");
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int step_count(double t_end, double dt) { return std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9))); }

double maxwell_frequency_bound(const StructuredHexMesh& mesh, double c) {
  const Vec3& h = mesh.cell_size();
  return 2.0 * std::sqrt(3.0) * c * std::sqrt(1.0 / (h.x * h.x) + 1.0 / (h.y * h.y) + 1.0 / (h.z * h.z));
}

double explicit_dt_limit(const StructuredHexMesh& mesh, double c) {
  return std::sqrt(3.0) / maxwell_frequency_bound(mesh, c);
}

TimeState advance(const Discretization& disc, const TimeState& s, double dt, const RunConfig& cfg,
                  const SourceProvider& sources, StepStats* stats) {
  if (cfg.integrator != Integrator::Avf) return explicit_step(disc, s, dt, cfg.constants, cfg.integrator, sources);
  StepStats local;
  TimeState out = avf_step(disc, s, dt, cfg.constants, cfg.avf, sources, &local);
  if (stats) {
    stats->substeps += local.substeps;
    stats->picard_iterations += local.picard_iterations;
    stats->halvings = std::max(stats->halvings, local.halvings);
    stats->min_dt = stats->min_dt == 0.0 ? local.min_dt : std::min(stats->min_dt, local.min_dt);
  }
  return out;
}

TimeState make_mms_state(const Discretization& disc, const PhysConstants& pc) {
  TimeState s;
  s.fields.rho = l2_project(disc.rho_space(), ScalarFunction([&](const Vec3& x) { return mms_fields(0.0, x, pc).rho; }),
                            disc.cg());
  s.fields.M = l2_project(disc.momentum_space(),
                          VectorFunction([&](const Vec3& x) { return mms_fields(0.0, x, pc).M; }), disc.cg());
  s.fields.E = l2_project(disc.electric_space(),
                          VectorFunction([&](const Vec3& x) { return mms_fields(0.0, x, pc).E; }), disc.cg());
  s.fields.B = disc.complex().ops().C * edge_interpolate(disc.electric_space(), mms_vector_potential);
  return s;
}

TimeState make_conservation_state(const Discretization& disc, const RunConfig& cfg) {
  const PhysConstants& pc = cfg.constants;
  TimeState s;
  s.fields.rho = l2_project(disc.rho_space(), ScalarFunction([&](const Vec3& x) {
                              return 2.0 + pc.m / (4.0 * kPi * pc.e) * x.y * std::sin(x.x * x.y);
                            }),
                            disc.cg());
  s.fields.M = l2_project(disc.momentum_space(), VectorFunction([](const Vec3& x) {
                            return 0.25 * Vec3{std::sin(kPi * x.x), std::sin(kPi * x.y), std::sin(kPi * x.z)};
                          }),
                          disc.cg());
  s.fields.E = l2_project(disc.electric_space(), VectorFunction([](const Vec3& x) {
                            return Vec3{-std::cos(x.x * x.y), std::cos(x.x * x.z), std::sin(x.x * x.y)};
                          }),
                          disc.cg());
  s.fields.B = disc.complex().ops().C * edge_interpolate(disc.electric_space(), mms_vector_potential);
  if (cfg.particle_count > 0)
    s.particles = sample_gaussian_ball(cfg.particle_count, cfg.particle_cutoff, cfg.seed, cfg.particle_weight);
  if (cfg.clean_initial) clean_electric_field(disc, s, pc, cfg.cg);
  return s;
}

std::string ConvergenceResult::table() const {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific;
  os << "cells,h,err_E,err_B,err_rho,err_M,order_E,order_B,order_rho,order_M\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    os << r.cells << ',' << r.h << ',' << r.err_E << ',' << r.err_B << ',' << r.err_rho << ',' << r.err_M;
    if (i == 0) {
      os << ",,,,\n";
      continue;
    }
    os << std::fixed << std::setprecision(3);
    for (double o : orders[i - 1]) os << ',' << o;
    os << std::scientific << std::setprecision(6) << '\n';
  }
  return os.str();
}

ConvergenceResult run_convergence(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  const PhysConstants& pc = cfg.constants;
  const SourceProvider sources = mms_source_provider(pc);
  const int steps = step_count(cfg.t_end, cfg.dt);
  const double dt = cfg.t_end / steps;
  const int quad = 4;

  ConvergenceResult result;
  for (int n : cfg.refinements) {
    const auto mesh = make_mesh(cfg, n);
    const Discretization disc(mesh, cfg.formulation, cfg.cg);
    TimeState s = make_mms_state(disc, pc);
    StepStats stats;
    for (int i = 0; i < steps; ++i) s = advance(disc, s, dt, cfg, sources, &stats);
    const double t = s.t;

    ConvergenceRow row;
    row.cells = n;
    row.h = mesh->min_cell_size();
    row.steps = steps;
    row.picard_iterations = stats.picard_iterations;
    row.err_E = l2_error(disc.electric_space(), s.fields.E,
                         VectorFunction([&](const Vec3& x) { return mms_fields(t, x, pc).E; }), quad);
    row.err_B = l2_error(disc.magnetic_space(), s.fields.B,
                         VectorFunction([&](const Vec3& x) { return mms_fields(t, x, pc).B; }), quad);
    row.err_rho = l2_error(disc.rho_space(), s.fields.rho,
                           ScalarFunction([&](const Vec3& x) { return mms_fields(t, x, pc).rho; }), quad);
    row.err_M = l2_error(disc.momentum_space(), s.fields.M,
                         VectorFunction([&](const Vec3& x) { return mms_fields(t, x, pc).M; }), quad);
    result.rows.push_back(row);

    std::ostringstream os;
    os << std::setprecision(4) << "n=" << n << " t=" << t << " E=" << row.err_E << " B=" << row.err_B
       << " rho=" << row.err_rho << " M=" << row.err_M << " picard=" << row.picard_iterations;
    note(log, os.str());
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const ConvergenceRow& a = result.rows[i - 1];
    const ConvergenceRow& b = result.rows[i];
    const double lh = std::log(a.h / b.h);
    result.orders.push_back({std::log(a.err_E / b.err_E) / lh, std::log(a.err_B / b.err_B) / lh,
                             std::log(a.err_rho / b.err_rho) / lh, std::log(a.err_M / b.err_M) / lh});
  }
  if (!cfg.output_dir.empty()) write_text(join(cfg.output_dir, "convergence.csv"), result.table());
  return result;
}

ConservationResult run_conservation(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  const PhysConstants& pc = cfg.constants;
  const auto mesh = make_mesh(cfg);
  const Discretization disc(mesh, cfg.formulation, cfg.cg);
  TimeState s = make_conservation_state(disc, cfg);
  const int steps = step_count(cfg.t_end, cfg.dt);
  const double dt = cfg.t_end / steps;

  ConservationResult r;
  const ConservationReport base = conservation_report(disc, s, pc, nullptr);
  r.series.push_back(base);
  r.max_gauss = base.gauss_residual_inf;
  r.max_divB = base.divB_L2;
  if (cfg.clean_initial) r.max_gauss_cleaned = base.gauss_residual_inf;

  std::ostringstream csv;
  csv << csv_header() << '\n' << csv_row(base) << '\n';
  for (int i = 1; i <= steps; ++i) {
    s = advance(disc, s, dt, cfg, {}, &r.stats);
    const bool clean = cfg.cleaning_interval > 0 && i % cfg.cleaning_interval == 0;
    if (clean) clean_electric_field(disc, s, pc, cfg.cg);
    const ConservationReport rep = conservation_report(disc, s, pc, &base);
    r.series.push_back(rep);
    r.max_mass_err = std::max(r.max_mass_err, std::fabs(rep.mass_rel_err));
    r.max_energy_err = std::max(r.max_energy_err, std::fabs(rep.energy_rel_err));
    r.max_gauss = std::max(r.max_gauss, rep.gauss_residual_inf);
    r.max_divB = std::max(r.max_divB, rep.divB_L2);
    if (clean) r.max_gauss_cleaned = std::max(r.max_gauss_cleaned, rep.gauss_residual_inf);
    if (i % cfg.output_every == 0 || i == steps) csv << csv_row(rep) << '\n';
    if (log && (i % std::max(1, steps / 10) == 0 || i == steps)) {
      std::ostringstream os;
      os << std::setprecision(3) << "step " << i << '/' << steps << " mass=" << rep.mass_rel_err
         << " energy=" << rep.energy_rel_err << " gauss=" << rep.gauss_residual_inf << " divB=" << rep.divB_L2;
      note(log, os.str());
    }
  }
  if (!cfg.output_dir.empty()) write_text(join(cfg.output_dir, "conservation.csv"), csv.str());
  r.final_state = std::move(s);
  return r;
}

TimeState make_wake_state(const Discretization& disc, const RunConfig& cfg) {
  const PhysConstants& pc = cfg.constants;
  TimeState s;
  s.fields = disc.zero_state();
  const double rho0 = cfg.background_density;
  s.fields.rho = l2_project(disc.rho_space(), ScalarFunction([rho0](const Vec3&) { return rho0; }), disc.cg());

  const double volume = kPi * cfg.beam_radius * cfg.beam_radius * cfg.beam_length;
  const double weight =
      cfg.beam_count > 0 ? cfg.beam_density * (rho0 / pc.m) * volume / static_cast<double>(cfg.beam_count) : 0.0;
  const double gamma = 1.0 / std::sqrt(1.0 - cfg.beam_speed * cfg.beam_speed);
  const Vec3 u{0.0, 0.0, pc.m * gamma * cfg.beam_speed * pc.c};
  const Vec3 centre = 0.5 * (cfg.lower + cfg.upper);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t p = 0; p < cfg.beam_count; ++p) {
    double a, b;
    do {
      a = unit(rng);
      b = unit(rng);
    } while (a * a + b * b >= 1.0);
    const Vec3 x{centre.x + cfg.beam_radius * a, centre.y + cfg.beam_radius * b,
                 cfg.beam_center_z + 0.5 * cfg.beam_length * unit(rng)};
    s.particles.add(x, u, weight);
  }
  if (cfg.clean_initial) clean_electric_field(disc, s, pc, cfg.cg);
  return s;
}

WakeResult run_wake_demo(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  const PhysConstants& pc = cfg.constants;
  const auto mesh = make_mesh(cfg);
  const Discretization disc(mesh, cfg.formulation, cfg.cg);
  TimeState s = make_wake_state(disc, cfg);

  WakeResult r;
  r.dt = cfg.cfl_safety * explicit_dt_limit(*mesh, pc.c);
  r.steps = step_count(cfg.t_end, r.dt);
  r.dt = cfg.t_end / r.steps;

  const bool write = !cfg.output_dir.empty();
  auto snapshot = [&](int step) {
    std::ostringstream name;
    name << "wake_" << std::setw(5) << std::setfill('0') << step << ".vtk";
    const std::string path = join(cfg.output_dir, name.str());
    write_vtk(path, *mesh, cell_center_values(disc, s.fields), "wake t=" + std::to_string(s.t));
    r.files.push_back(path);
  };
  if (write) snapshot(0);

  for (int i = 1; i <= r.steps; ++i) {
    s = advance(disc, s, r.dt, cfg);
    if (cfg.cleaning_interval > 0 && i % cfg.cleaning_interval == 0) clean_electric_field(disc, s, pc, cfg.cg);
    if (write && ((cfg.vtk_every > 0 && i % cfg.vtk_every == 0) || i == r.steps)) snapshot(i);
    if (log && (i % std::max(1, r.steps / 10) == 0 || i == r.steps)) {
      std::ostringstream os;
      os << std::setprecision(3) << "step " << i << '/' << r.steps << " t=" << s.t
         << " max|E|=" << max_abs(s.fields.E) << " cfl=" << cfl_number(disc, s.fields, pc, r.dt);
      note(log, os.str());
    }
  }

  r.max_field = std::max(max_abs(s.fields.E), max_abs(s.fields.B));
  r.removed_weight = s.removed_weight;
  r.beam_head = cfg.lower.z;
  for (std::size_t p = 0; p < s.particles.size(); ++p)
    if (s.particles.active[p]) r.beam_head = std::max(r.beam_head, s.particles.X[p].z);

  const CellFields cells = cell_center_values(disc, s.fields);
  for (double v : cells.rho)
    r.density_modulation = std::max(r.density_modulation, std::fabs(v - cfg.background_density) / cfg.background_density);

  // Axis samples: E_z averaged over the four cell columns touching the beam axis.
  const Vec3 h = mesh->cell_size();
  const Vec3 centre = 0.5 * (cfg.lower + cfg.upper);
  for (int k = 0; k < cfg.cells[2]; ++k) {
    const double z = cfg.lower.z + (k + 0.5) * h.z;
    if (z > r.beam_head) break;
    double ez = 0.0;
    for (double sx : {-0.5, 0.5})
      for (double sy : {-0.5, 0.5}) {
        const Vec3 x{centre.x + sx * h.x, centre.y + sy * h.y, z};
        ez += 0.25 * std::get<Vec3>(eval_field(disc.electric_space(), s.fields.E, x)).z;
      }
    r.axis_z.push_back(z);
    r.axis_ez.push_back(ez);
    r.ez_max = std::max(r.ez_max, std::fabs(ez));
  }
  int last_sign = 0;
  for (double ez : r.axis_ez) {
    if (std::fabs(ez) <= 0.05 * r.ez_max) continue;
    const int sign = ez > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++r.ez_sign_changes;
    last_sign = sign;
  }

  if (write) {
    write_particles_csv(join(cfg.output_dir, "wake_particles.csv"), s.particles);
    write_coefficients(join(cfg.output_dir, "wake_final.coef"), s.fields, s.t);
    std::ostringstream axis;
    axis << std::setprecision(17) << "z,Ez\n";
    for (std::size_t i = 0; i < r.axis_z.size(); ++i) axis << r.axis_z[i] << ',' << r.axis_ez[i] << '\n';
    write_text(join(cfg.output_dir, "wake_axis.csv"), axis.str());
  }
  return r;
}

CleanFieldResult run_clean_field(const RunConfig& cfg, const std::string& input) {
  validate(cfg);
  const PhysConstants& pc = cfg.constants;
  const auto mesh = make_mesh(cfg);
  const Discretization disc(mesh, cfg.formulation, cfg.cg);
  RunConfig raw = cfg;
  raw.clean_initial = false;
  TimeState s = make_conservation_state(disc, raw);
  if (!input.empty()) {
    s.fields = read_coefficients(input, &s.t);
    disc.check(s.fields);
  }

  CleanFieldResult r;
  r.residual_before = gauss_residual(disc, s.fields, s.particles, pc);
  const DofVector before = s.fields.E;
  clean_electric_field(disc, s, pc, cfg.cg);
  r.residual_after = gauss_residual(disc, s.fields, s.particles, pc);
  const DofVector delta = linear_combination(1.0, s.fields.E, -1.0, before);
  r.change_inf = max_abs(delta);
  r.curl_change_inf = max_abs(disc.complex().ops().C * delta);
  if (!cfg.output_dir.empty()) write_coefficients(join(cfg.output_dir, "cleaned.coef"), s.fields, s.t);
  return r;
}

std::string info_report(const RunConfig& cfg) {
  validate(cfg);
  const auto mesh = make_mesh(cfg);
  const Discretization disc(mesh, cfg.formulation, cfg.cg);
  const Index3& n = mesh->cells_per_dim();
  std::ostringstream os;
  os << "mesh        " << n[0] << " x " << n[1] << " x " << n[2] << " cells, h_min " << mesh->min_cell_size()
     << ", periodic " << cfg.periodic[0] << cfg.periodic[1] << cfg.periodic[2] << '\n';
  os << "formulation " << to_string(cfg.formulation) << ", k " << cfg.k << '\n';
  auto line = [&](const char* label, const FeSpace& sp) {
    os << std::left << std::setw(12) << label << sp.kind().name() << ": " << sp.n_dofs() << " dofs\n";
  };
  line("rho", disc.rho_space());
  line("M", disc.momentum_space());
  line("E", disc.electric_space());
  line("B", disc.magnetic_space());
  line("potential", disc.potential_space());
  os << "total       "
     << disc.rho_space().n_dofs() + disc.momentum_space().n_dofs() + disc.electric_space().n_dofs() +
            disc.magnetic_space().n_dofs()
     << " field dofs\n";
  os << "integrator  " << to_string(cfg.integrator) << ", dt " << cfg.dt << ", " << step_count(cfg.t_end, cfg.dt)
     << " steps to t = " << cfg.t_end << ", c dt / h_min " << cfg.constants.c * cfg.dt / mesh->min_cell_size()
     << '\n';
  os << "particles   " << cfg.particle_count << '\n';
  return os.str();
}

}  // namespace coldplasma::harness
