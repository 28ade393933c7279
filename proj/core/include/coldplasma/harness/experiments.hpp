#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coldplasma/diagnostics.hpp"
#include "coldplasma/harness/config.hpp"

namespace coldplasma::harness {

std::shared_ptr<const StructuredHexMesh> make_mesh(const RunConfig& cfg);
std::shared_ptr<const StructuredHexMesh> make_mesh(const RunConfig& cfg, int cells_per_axis);

/// Least-squares slope of log y against log x.
double fit_order(std::span<const double> x, std::span<const double> y);

/// Number of equal steps covering t_end with step at most dt.
int step_count(double t_end, double dt);

/// Bound on the largest angular frequency of the discrete Maxwell operator,
/// 2 sqrt(3) c sqrt(sum_d 1 / h_d^2).
double maxwell_frequency_bound(const StructuredHexMesh& mesh, double c);

/// Explicit step limit sqrt(3) / maxwell_frequency_bound, the imaginary-axis
/// stability bound of SSP-RK3.
double explicit_dt_limit(const StructuredHexMesh& mesh, double c);

/// One step of cfg.integrator; AVF accumulates into `stats` when given.
TimeState advance(const Discretization& disc, const TimeState& s, double dt, const RunConfig& cfg,
                  const SourceProvider& sources = {}, StepStats* stats = nullptr);

/// Manufactured solution at t = 0 with B taken as the discrete curl of the
/// interpolated vector potential.
TimeState make_mms_state(const Discretization& disc, const PhysConstants& pc);

/// Conservation-study initial state: projected fluid and E, B = C a, the
/// Gaussian particle ball, and an initial Gauss cleaning if requested.
TimeState make_conservation_state(const Discretization& disc, const RunConfig& cfg);

struct ConvergenceRow {
  int cells = 0;
  double h = 0.0;
  double err_E = 0.0;
  double err_B = 0.0;
  double err_rho = 0.0;
  double err_M = 0.0;
  int steps = 0;
  int picard_iterations = 0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  /// Observed orders (E, B, rho, M) between consecutive rows.
  std::vector<std::array<double, 4>> orders;
  std::string table() const;
};

/// MMS study on cfg.refinements; L2 errors at the final time.
ConvergenceResult run_convergence(const RunConfig& cfg, std::ostream* log = nullptr);

struct ConservationResult {
  std::vector<ConservationReport> series;  ///< one entry per step, t = 0 first
  StepStats stats;
  TimeState final_state;
  double max_mass_err = 0.0;
  double max_energy_err = 0.0;
  double max_gauss = 0.0;
  double max_divB = 0.0;
  /// Largest Gauss residual among states right after a cleaning (t = 0 included).
  double max_gauss_cleaned = 0.0;
};

/// Conservation study; writes conservation.csv to cfg.output_dir unless it is empty.
ConservationResult run_conservation(const RunConfig& cfg, std::ostream* log = nullptr);

/// Wake demo initial state: uniform cold background at rest and a
/// cylindrical beam moving along +z.
TimeState make_wake_state(const Discretization& disc, const RunConfig& cfg);

struct WakeResult {
  int steps = 0;
  double dt = 0.0;
  double max_field = 0.0;           ///< max coefficient magnitude of E and B
  double density_modulation = 0.0;  ///< max |rho - rho_0| / rho_0 at cell centres
  double ez_max = 0.0;              ///< max |E_z| on the axis samples
  int ez_sign_changes = 0;          ///< sign changes of E_z along the axis behind the beam head
  double beam_head = 0.0;           ///< largest z of an active beam particle
  double removed_weight = 0.0;
  std::vector<double> axis_z;
  std::vector<double> axis_ez;
  std::vector<std::string> files;
};

/// Scaled wake run; VTK snapshots and a final particle and coefficient dump
/// go to cfg.output_dir unless it is empty.
WakeResult run_wake_demo(const RunConfig& cfg, std::ostream* log = nullptr);

struct CleanFieldResult {
  double residual_before = 0.0;
  double residual_after = 0.0;
  double change_inf = 0.0;
  double curl_change_inf = 0.0;
};

/// Cleans E of the conservation initial state, or of a coefficient dump
/// when `input` is non-empty, and writes cleaned.coef to cfg.output_dir.
CleanFieldResult run_clean_field(const RunConfig& cfg, const std::string& input = {});

/// Mesh, DOF counts and time-step data of a configuration.
std::string info_report(const RunConfig& cfg);

}  // namespace coldplasma::harness
