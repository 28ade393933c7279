#include "coldplasma/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>
#include <iomanip>
#include <sstream>

#include "coldplasma/error.hpp"

namespace coldplasma::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto parts = split(v);
  if (parts.size() == 1) {
    const double s = to_double(key, parts[0]);
    return {s, s, s};
  }
  if (parts.size() != 3) throw ConfigError(key + ": expected one or three numbers, got '" + v + "'");
  return {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt(const Vec3& v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

struct Key {
  std::string name;  ///< section.key
  std::string doc;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"mesh.lower", "lower corner of the box (one or three numbers)",
       [](RunConfig& c, const std::string& v) { c.lower = to_vec3("mesh.lower", v); },
       [](const RunConfig& c) { return fmt(c.lower); }},
      {"mesh.upper", "upper corner of the box (one or three numbers)",
       [](RunConfig& c, const std::string& v) { c.upper = to_vec3("mesh.upper", v); },
       [](const RunConfig& c) { return fmt(c.upper); }},
      {"mesh.cells", "cells per axis (one or three integers)",
       [](RunConfig& c, const std::string& v) {
         const auto p = split(v);
         if (p.size() != 1 && p.size() != 3) throw ConfigError("mesh.cells: expected one or three integers");
         for (int d = 0; d < 3; ++d) c.cells[d] = static_cast<int>(to_int("mesh.cells", p[p.size() == 1 ? 0 : d]));
       },
       [](const RunConfig& c) {
         return std::to_string(c.cells[0]) + " " + std::to_string(c.cells[1]) + " " + std::to_string(c.cells[2]);
       }},
      {"mesh.periodic", "periodicity flags per axis (three booleans)",
       [](RunConfig& c, const std::string& v) {
         const auto p = split(v);
         if (p.size() != 3) throw ConfigError("mesh.periodic: expected three booleans");
         for (int d = 0; d < 3; ++d) c.periodic[d] = to_bool("mesh.periodic", p[d]);
       },
       [](const RunConfig& c) {
         return std::string(c.periodic[0] ? "1" : "0") + " " + (c.periodic[1] ? "1" : "0") + " " +
                (c.periodic[2] ? "1" : "0");
       }},
      {"discretization.k", "degree parameter of the complex (0 only)",
       [](RunConfig& c, const std::string& v) { c.k = static_cast<int>(to_int("discretization.k", v)); },
       [](const RunConfig& c) { return std::to_string(c.k); }},
      {"discretization.formulation", "fluxfree or dgflux",
       [](RunConfig& c, const std::string& v) { c.formulation = formulation_from_string(v); },
       [](const RunConfig& c) { return to_string(c.formulation); }},
      {"time.integrator", "avf, ssprk3 or euler",
       [](RunConfig& c, const std::string& v) { c.integrator = integrator_from_string(v); },
       [](const RunConfig& c) { return to_string(c.integrator); }},
      {"time.dt", "time step (length / c)",
       [](RunConfig& c, const std::string& v) { c.dt = to_double("time.dt", v); },
       [](const RunConfig& c) { return fmt(c.dt); }},
      {"time.t_end", "final time (length / c)",
       [](RunConfig& c, const std::string& v) { c.t_end = to_double("time.t_end", v); },
       [](const RunConfig& c) { return fmt(c.t_end); }},
      {"physics.c", "speed of light",
       [](RunConfig& c, const std::string& v) { c.constants.c = to_double("physics.c", v); },
       [](const RunConfig& c) { return fmt(c.constants.c); }},
      {"physics.m", "species mass",
       [](RunConfig& c, const std::string& v) { c.constants.m = to_double("physics.m", v); },
       [](const RunConfig& c) { return fmt(c.constants.m); }},
      {"physics.e", "species charge",
       [](RunConfig& c, const std::string& v) { c.constants.e = to_double("physics.e", v); },
       [](const RunConfig& c) { return fmt(c.constants.e); }},
      {"physics.n0", "neutralising background number density",
       [](RunConfig& c, const std::string& v) { c.constants.n0 = to_double("physics.n0", v); },
       [](const RunConfig& c) { return fmt(c.constants.n0); }},
      {"particles.count", "number of macro-particles",
       [](RunConfig& c, const std::string& v) {
         c.particle_count = static_cast<std::size_t>(to_int("particles.count", v));
       },
       [](const RunConfig& c) { return std::to_string(c.particle_count); }},
      {"particles.weight", "weight of each macro-particle",
       [](RunConfig& c, const std::string& v) { c.particle_weight = to_double("particles.weight", v); },
       [](const RunConfig& c) { return fmt(c.particle_weight); }},
      {"particles.cutoff", "half-width of the box the positions are drawn in",
       [](RunConfig& c, const std::string& v) { c.particle_cutoff = to_double("particles.cutoff", v); },
       [](const RunConfig& c) { return fmt(c.particle_cutoff); }},
      {"particles.seed", "seed of every random draw",
       [](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int("particles.seed", v)); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"solver.cg_tol", "relative residual tolerance of every CG solve",
       [](RunConfig& c, const std::string& v) { c.cg.rel_tol = to_double("solver.cg_tol", v); },
       [](const RunConfig& c) { return fmt(c.cg.rel_tol); }},
      {"solver.cg_max_iter", "iteration cap of every CG solve",
       [](RunConfig& c, const std::string& v) { c.cg.max_iter = static_cast<int>(to_int("solver.cg_max_iter", v)); },
       [](const RunConfig& c) { return std::to_string(c.cg.max_iter); }},
      {"avf.theta", "density average in volume terms",
       [](RunConfig& c, const std::string& v) { c.avf.theta = to_double("avf.theta", v); },
       [](const RunConfig& c) { return fmt(c.avf.theta); }},
      {"avf.theta2", "density average in face fluxes",
       [](RunConfig& c, const std::string& v) { c.avf.theta2 = to_double("avf.theta2", v); },
       [](const RunConfig& c) { return fmt(c.avf.theta2); }},
      {"avf.theta3", "momentum average in the tangential flux",
       [](RunConfig& c, const std::string& v) { c.avf.theta3 = to_double("avf.theta3", v); },
       [](const RunConfig& c) { return fmt(c.avf.theta3); }},
      {"avf.xi_points", "Gauss points of the path average",
       [](RunConfig& c, const std::string& v) {
         c.avf.xi_rule = gauss_legendre(static_cast<int>(to_int("avf.xi_points", v)));
       },
       [](const RunConfig& c) { return std::to_string(c.avf.xi_rule.points.size()); }},
      {"avf.picard_tol", "tolerance on the scaled Picard increment",
       [](RunConfig& c, const std::string& v) { c.avf.picard_tol = to_double("avf.picard_tol", v); },
       [](const RunConfig& c) { return fmt(c.avf.picard_tol); }},
      {"avf.picard_max", "Picard iteration cap",
       [](RunConfig& c, const std::string& v) { c.avf.picard_max = static_cast<int>(to_int("avf.picard_max", v)); },
       [](const RunConfig& c) { return std::to_string(c.avf.picard_max); }},
      {"avf.adapt_dt", "halve dt when Picard fails",
       [](RunConfig& c, const std::string& v) { c.avf.adapt_dt = to_bool("avf.adapt_dt", v); },
       [](const RunConfig& c) { return std::string(c.avf.adapt_dt ? "true" : "false"); }},
      {"avf.max_halvings", "maximum number of halvings per step",
       [](RunConfig& c, const std::string& v) { c.avf.max_halvings = static_cast<int>(to_int("avf.max_halvings", v)); },
       [](const RunConfig& c) { return std::to_string(c.avf.max_halvings); }},
      {"cleaning.interval", "steps between Gauss cleanings (0 disables)",
       [](RunConfig& c, const std::string& v) {
         c.cleaning_interval = static_cast<int>(to_int("cleaning.interval", v));
       },
       [](const RunConfig& c) { return std::to_string(c.cleaning_interval); }},
      {"cleaning.initial", "clean E before the first step",
       [](RunConfig& c, const std::string& v) { c.clean_initial = to_bool("cleaning.initial", v); },
       [](const RunConfig& c) { return std::string(c.clean_initial ? "true" : "false"); }},
      {"output.dir", "directory for CSV, VTK and coefficient files",
       [](RunConfig& c, const std::string& v) { c.output_dir = v; },
       [](const RunConfig& c) { return c.output_dir; }},
      {"output.every", "steps between CSV rows",
       [](RunConfig& c, const std::string& v) { c.output_every = static_cast<int>(to_int("output.every", v)); },
       [](const RunConfig& c) { return std::to_string(c.output_every); }},
      {"output.vtk_every", "steps between VTK snapshots (0: final state only)",
       [](RunConfig& c, const std::string& v) { c.vtk_every = static_cast<int>(to_int("output.vtk_every", v)); },
       [](const RunConfig& c) { return std::to_string(c.vtk_every); }},
      {"convergence.refinements", "cells per axis of each mesh in the study",
       [](RunConfig& c, const std::string& v) {
         c.refinements.clear();
         for (const auto& p : split(v)) c.refinements.push_back(static_cast<int>(to_int("convergence.refinements", p)));
       },
       [](const RunConfig& c) {
         std::string s;
         for (int r : c.refinements) s += (s.empty() ? "" : " ") + std::to_string(r);
         return s;
       }},
      {"wake.beam_count", "number of beam macro-particles",
       [](RunConfig& c, const std::string& v) { c.beam_count = static_cast<std::size_t>(to_int("wake.beam_count", v)); },
       [](const RunConfig& c) { return std::to_string(c.beam_count); }},
      {"wake.beam_speed", "beam speed in units of c",
       [](RunConfig& c, const std::string& v) { c.beam_speed = to_double("wake.beam_speed", v); },
       [](const RunConfig& c) { return fmt(c.beam_speed); }},
      {"wake.beam_radius", "beam radius",
       [](RunConfig& c, const std::string& v) { c.beam_radius = to_double("wake.beam_radius", v); },
       [](const RunConfig& c) { return fmt(c.beam_radius); }},
      {"wake.beam_length", "beam length along z",
       [](RunConfig& c, const std::string& v) { c.beam_length = to_double("wake.beam_length", v); },
       [](const RunConfig& c) { return fmt(c.beam_length); }},
      {"wake.beam_center_z", "initial z of the beam centre",
       [](RunConfig& c, const std::string& v) { c.beam_center_z = to_double("wake.beam_center_z", v); },
       [](const RunConfig& c) { return fmt(c.beam_center_z); }},
      {"wake.beam_density", "beam number density relative to the background (0 for the control run)",
       [](RunConfig& c, const std::string& v) { c.beam_density = to_double("wake.beam_density", v); },
       [](const RunConfig& c) { return fmt(c.beam_density); }},
      {"wake.background_density", "background fluid mass density",
       [](RunConfig& c, const std::string& v) { c.background_density = to_double("wake.background_density", v); },
       [](const RunConfig& c) { return fmt(c.background_density); }},
      {"wake.cfl_safety", "dt = safety * sqrt(3) / (2 sqrt(3) c sqrt(sum 1/h^2)), the SSP-RK3 Maxwell limit",
       [](RunConfig& c, const std::string& v) { c.cfl_safety = to_double("wake.cfl_safety", v); },
       [](const RunConfig& c) { return fmt(c.cfl_safety); }},
  };
  return table;
}

const Key& find_key(const std::string& name) {
  for (const Key& k : keys())
    if (k.name == name) return k;
  throw ConfigError("unknown configuration key '" + name + "'");
}

}  // namespace

RunConfig load_config(const std::string& path, RunConfig cfg) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config '" + path + "': " + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside of a section in '" + path + "'");
    for (const auto& [key, value] : body) find_key(section + "." + key).set(cfg, trim(value.data()));
  }
  validate(cfg);
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  find_key(trim(assignment.substr(0, eq))).set(cfg, trim(assignment.substr(eq + 1)));
}

std::string to_ini(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const Key& k : keys()) {
    const auto dot = k.name.find('.');
    const std::string s = k.name.substr(0, dot);
    if (s != section) {
      os << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    os << "; " << k.doc << '\n' << k.name.substr(dot + 1) << " = " << k.get(cfg) << '\n';
  }
  return os.str();
}

RunConfig convergence_defaults() {
  RunConfig c;
  c.integrator = Integrator::Avf;
  c.dt = 2.5e-4;
  c.t_end = 0.1;
  c.refinements = {4, 8, 16};
  c.clean_initial = false;
  c.output_dir = "output/converge";
  return c;
}

RunConfig conservation_defaults() {
  RunConfig c;
  c.cells = {16, 16, 16};
  c.integrator = Integrator::Avf;
  c.dt = 5e-3;
  c.t_end = 0.3;
  c.particle_count = 1000;
  c.particle_weight = 1e-3;
  // Background matching rho = 2 + ..., so the prescribed E already satisfies Gauss's law.
  c.constants.n0 = 2.0;
  c.output_dir = "output/conserve";
  return c;
}

RunConfig wake_defaults() {
  RunConfig c;
  c.cells = {16, 16, 20};
  c.periodic = {true, true, false};
  c.integrator = Integrator::SspRk3;
  c.t_end = 1.4;
  c.cleaning_interval = 100;
  c.constants.n0 = 1.0;
  c.output_dir = "output/wake";
  return c;
}

void validate(const RunConfig& c) {
  if (c.k != 0) throw ConfigError("discretization.k: only k = 0 is built");
  if (!(c.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(c.t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (!(c.constants.c > 0.0) || !(c.constants.m > 0.0)) throw ConfigError("physics.c and physics.m must be positive");
  for (int d = 0; d < 3; ++d) {
    if (c.cells[d] < 1) throw ConfigError("mesh.cells must be >= 1");
    if (!(c.upper[d] > c.lower[d])) throw ConfigError("mesh.upper must exceed mesh.lower");
  }
  if (c.cleaning_interval < 0) throw ConfigError("cleaning.interval must be >= 0");
  if (c.output_every < 1) throw ConfigError("output.every must be >= 1");
  if (c.vtk_every < 0) throw ConfigError("output.vtk_every must be >= 0");
  for (double th : {c.avf.theta, c.avf.theta2, c.avf.theta3})
    if (th < 0.0 || th > 1.0) throw ConfigError("avf.theta* must lie in [0, 1]");
  if (c.avf.xi_rule.points.empty()) throw ConfigError("avf.xi_points must be >= 1");
  if (c.avf.picard_max < 1) throw ConfigError("avf.picard_max must be >= 1");
  if (!(c.cg.rel_tol > 0.0) || c.cg.max_iter < 1) throw ConfigError("solver settings must be positive");
  if (c.refinements.empty()) throw ConfigError("convergence.refinements must list at least one mesh");
  if (!(c.beam_speed >= 0.0 && c.beam_speed < 1.0)) throw ConfigError("wake.beam_speed must lie in [0, 1)");
  if (!(c.background_density > 0.0)) throw ConfigError("wake.background_density must be positive");
  if (!(c.cfl_safety > 0.0)) throw ConfigError("wake.cfl_safety must be positive");
}

}  // namespace coldplasma::harness
