#include "coldplasma/harness/io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "coldplasma/error.hpp"

namespace coldplasma::harness {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  ensure_parent_directory(path);
  std::ofstream os(path, mode);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw Error("cannot open '" + path + "' for reading");
  return is;
}

void expect(std::istream& is, const std::string& word, const std::string& path) {
  std::string got;
  is >> got;
  if (got != word) throw Error(path + ": expected '" + word + "', found '" + got + "'");
}

constexpr char kMagic[8] = {'C', 'P', 'C', 'O', 'E', 'F', '0', '1'};

void write_block(std::ostream& os, const DofVector& v) {
  const std::uint64_t n = v.size();
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
}

DofVector read_block(std::istream& is, const std::string& path) {
  std::uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is || n > (std::uint64_t{1} << 40)) throw Error(path + ": truncated coefficient dump");
  DofVector v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw Error(path + ": truncated coefficient dump");
  return v;
}

}  // namespace

void ensure_parent_directory(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void write_text(const std::string& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw Error("failed writing '" + path + "'");
}

CellFields cell_center_values(const Discretization& disc, const FieldState& f) {
  const std::size_t n = disc.mesh().num_cells();
  CellFields out;
  out.rho.resize(n);
  out.M.resize(n);
  out.E.resize(n);
  out.B.resize(n);
  for (std::size_t cell = 0; cell < n; ++cell) {
    const CellRef at{cell, {0.5, 0.5, 0.5}};
    out.rho[cell] = eval_scalar(disc.rho_space(), f.rho, at);
    out.M[cell] = eval_vector(disc.momentum_space(), f.M, at);
    out.E[cell] = eval_vector(disc.electric_space(), f.E, at);
    out.B[cell] = eval_vector(disc.magnetic_space(), f.B, at);
  }
  return out;
}

void write_vtk(const std::string& path, const StructuredHexMesh& mesh, const CellFields& fields,
               const std::string& title) {
  auto os = open_out(path);
  os << std::setprecision(17);
  const Index3& n = mesh.cells_per_dim();
  const Vec3& h = mesh.cell_size();
  const std::size_t nx = n[0] + 1, ny = n[1] + 1, nz = n[2] + 1;
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nx * ny * nz << " double\n";
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        os << mesh.lower().x + i * h.x << ' ' << mesh.lower().y + j * h.y << ' ' << mesh.lower().z + k * h.z << '\n';

  const std::size_t cells = mesh.num_cells();
  os << "CELLS " << cells << ' ' << 9 * cells << '\n';
  auto pid = [&](std::size_t i, std::size_t j, std::size_t k) { return i + nx * (j + ny * k); };
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const Index3 c = mesh.cell_coords(cell);
    const std::size_t i = c[0], j = c[1], k = c[2];
    os << 8 << ' ' << pid(i, j, k) << ' ' << pid(i + 1, j, k) << ' ' << pid(i + 1, j + 1, k) << ' '
       << pid(i, j + 1, k) << ' ' << pid(i, j, k + 1) << ' ' << pid(i + 1, j, k + 1) << ' '
       << pid(i + 1, j + 1, k + 1) << ' ' << pid(i, j + 1, k + 1) << '\n';
  }
  os << "CELL_TYPES " << cells << '\n';
  for (std::size_t cell = 0; cell < cells; ++cell) os << "12\n";

  os << "CELL_DATA " << cells << '\n';
  os << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
  for (double v : fields.rho) os << v << '\n';
  auto vectors = [&](const char* name, const std::vector<Vec3>& v) {
    os << "VECTORS " << name << " double\n";
    for (const Vec3& x : v) os << x.x << ' ' << x.y << ' ' << x.z << '\n';
  };
  vectors("M", fields.M);
  vectors("E", fields.E);
  vectors("B", fields.B);
  if (!os) throw Error("failed writing '" + path + "'");
}

VtkData read_vtk(const std::string& path) {
  auto is = open_in(path);
  VtkData d;
  std::string line;
  std::getline(is, line);
  if (line.rfind("# vtk DataFile", 0) != 0) throw Error(path + ": not a legacy VTK file");
  std::getline(is, d.title);
  expect(is, "ASCII", path);
  expect(is, "DATASET", path);
  expect(is, "UNSTRUCTURED_GRID", path);

  std::size_t n_cells = 0;
  for (std::string word; is >> word;) {
    if (word == "POINTS") {
      std::size_t n = 0;
      std::string type;
      is >> n >> type;
      d.points.resize(n);
      for (Vec3& p : d.points) is >> p.x >> p.y >> p.z;
    } else if (word == "CELLS") {
      std::size_t total = 0;
      is >> n_cells >> total;
      d.cells.resize(n_cells);
      for (auto& c : d.cells) {
        int count = 0;
        is >> count;
        if (count != 8) throw Error(path + ": only hexahedra are supported");
        for (auto& v : c) is >> v;
      }
    } else if (word == "CELL_TYPES") {
      std::size_t n = 0;
      is >> n;
      for (std::size_t i = 0; i < n; ++i) {
        int type = 0;
        is >> type;
        if (type != 12) throw Error(path + ": only hexahedra are supported");
      }
    } else if (word == "CELL_DATA") {
      is >> n_cells;
    } else if (word == "SCALARS") {
      std::string name, type;
      int comps = 1;
      is >> name >> type >> comps;
      expect(is, "LOOKUP_TABLE", path);
      is >> word;
      auto& v = d.scalars[name];
      v.resize(n_cells);
      for (double& x : v) is >> x;
    } else if (word == "VECTORS") {
      std::string name, type;
      is >> name >> type;
      auto& v = d.vectors[name];
      v.resize(n_cells);
      for (Vec3& x : v) is >> x.x >> x.y >> x.z;
    } else {
      throw Error(path + ": unexpected token '" + word + "'");
    }
    if (!is) throw Error(path + ": malformed section '" + word + "'");
  }
  return d;
}

void write_coefficients(const std::string& path, const FieldState& f, double t) {
  auto os = open_out(path, std::ios::out | std::ios::binary);
  os.write(kMagic, sizeof kMagic);
  os.write(reinterpret_cast<const char*>(&t), sizeof t);
  for (const DofVector* v : {&f.rho, &f.M, &f.E, &f.B}) write_block(os, *v);
  if (!os) throw Error("failed writing '" + path + "'");
}

FieldState read_coefficients(const std::string& path, double* t) {
  auto is = open_in(path, std::ios::in | std::ios::binary);
  char magic[sizeof kMagic];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(path + ": not a coefficient dump");
  double time = 0.0;
  is.read(reinterpret_cast<char*>(&time), sizeof time);
  if (t) *t = time;
  FieldState f;
  for (DofVector* v : {&f.rho, &f.M, &f.E, &f.B}) *v = read_block(is, path);
  return f;
}

void write_particles_csv(const std::string& path, const ParticleSet& p) {
  auto os = open_out(path);
  os << std::setprecision(17) << "id,x,y,z,ux,uy,uz,w,active\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    os << i << ',' << p.X[i].x << ',' << p.X[i].y << ',' << p.X[i].z << ',' << p.U[i].x << ',' << p.U[i].y << ','
       << p.U[i].z << ',' << p.w[i] << ',' << int(p.active[i]) << '\n';
  if (!os) throw Error("failed writing '" + path + "'");
}

ParticleSet read_particles_csv(const std::string& path) {
  auto is = open_in(path);
  std::string line;
  std::getline(is, line);
  if (line != "id,x,y,z,ux,uy,uz,w,active") throw Error(path + ": unexpected particle header");
  ParticleSet p;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream row(line);
    std::size_t id = 0;
    Vec3 x, u;
    double w = 0.0;
    int active = 0;
    if (!(row >> id >> x.x >> x.y >> x.z >> u.x >> u.y >> u.z >> w >> active))
      throw Error(path + ": malformed particle row");
    p.add(x, u, w);
    p.active.back() = static_cast<std::uint8_t>(active != 0);
  }
  return p;
}

}  // namespace coldplasma::harness
