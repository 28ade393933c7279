#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coldplasma/discretization.hpp"
#include "coldplasma/particles.hpp"

namespace coldplasma::harness {

/// Creates the parent directories of `path` if needed.
void ensure_parent_directory(const std::string& path);

/// Writes `text` to `path`; throws Error if the file cannot be opened.
void write_text(const std::string& path, const std::string& text);

/// Field values at cell centres.
struct CellFields {
  std::vector<double> rho;
  std::vector<Vec3> M;
  std::vector<Vec3> E;
  std::vector<Vec3> B;
};

CellFields cell_center_values(const Discretization& disc, const FieldState& f);

/// Legacy ASCII VTK unstructured grid of hexahedra with the cell fields as
/// CELL_DATA, 17 significant digits.
void write_vtk(const std::string& path, const StructuredHexMesh& mesh, const CellFields& fields,
               const std::string& title = "coldplasma");

/// Contents of a file written by write_vtk.
struct VtkData {
  std::string title;
  std::vector<Vec3> points;
  std::vector<std::array<std::int64_t, 8>> cells;
  std::map<std::string, std::vector<double>> scalars;
  std::map<std::string, std::vector<Vec3>> vectors;
};

VtkData read_vtk(const std::string& path);

/// Binary dump of all coefficient vectors and the time, for exact restart.
void write_coefficients(const std::string& path, const FieldState& f, double t);
FieldState read_coefficients(const std::string& path, double* t = nullptr);

/// Columns id,x,y,z,ux,uy,uz,w,active with 17 significant digits.
void write_particles_csv(const std::string& path, const ParticleSet& p);
ParticleSet read_particles_csv(const std::string& path);

}  // namespace coldplasma::harness
