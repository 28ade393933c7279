#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldplasma/discretization.hpp"
#include "coldplasma/integrators.hpp"
#include "coldplasma/mesh.hpp"
#include "coldplasma/physics.hpp"

namespace coldplasma::harness {

/// Every setting of one experiment. Lengths are in units of the domain,
/// times in units of length / c, densities in particles per unit volume.
struct RunConfig {
  // [mesh]
  Vec3 lower{-1.0, -1.0, -1.0};
  Vec3 upper{1.0, 1.0, 1.0};
  Index3 cells{4, 4, 4};
  Periodicity periodic{false, false, false};
  // [discretization]
  int k = 0;
  Formulation formulation = Formulation::FluxFree;
  // [time]
  Integrator integrator = Integrator::Avf;
  double dt = 5e-3;
  double t_end = 0.3;
  // [physics]
  PhysConstants constants;
  // [particles]
  std::size_t particle_count = 0;
  double particle_weight = 1e-3;
  double particle_cutoff = 0.5;
  std::uint64_t seed = 1;
  // [solver]
  CgConfig cg;
  // [avf]
  AvfConfig avf;
  // [cleaning]
  int cleaning_interval = 0;  ///< steps between Gauss cleanings, 0 disables
  bool clean_initial = true;
  // [output]
  std::string output_dir = "output";
  int output_every = 1;  ///< CSV cadence in steps
  int vtk_every = 0;     ///< VTK cadence in steps, 0 writes only the final state
  // [convergence]
  std::vector<int> refinements{4, 8, 16};  ///< cells per axis of each mesh
  // [wake]
  std::size_t beam_count = 2000;
  double beam_speed = 0.97;  ///< in units of c
  double beam_radius = 0.2;
  double beam_length = 0.3;
  double beam_center_z = -0.55;
  double beam_density = 0.1;  ///< beam number density relative to the background
  double background_density = 1.0;
  double cfl_safety = 0.5;  ///< fraction of the explicit stability limit
};

/// Reads an INI file; unknown sections or keys raise ConfigError.
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies "section.key=value"; unknown keys raise ConfigError.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// All keys with their current values, as INI text.
std::string to_ini(const RunConfig& cfg);

/// Presets for the three experiments.
RunConfig convergence_defaults();
RunConfig conservation_defaults();
RunConfig wake_defaults();

/// Throws ConfigError on inconsistent settings.
void validate(const RunConfig& cfg);

}  // namespace coldplasma::harness
