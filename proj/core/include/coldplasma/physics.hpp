#pragma once

#include <cmath>

#include "coldplasma/vec3.hpp"

namespace coldplasma {

/// Gaussian-unit constants of a single species shared by the fluid and the
/// macro-particles.
struct PhysConstants {
  double c = 1.0;   ///< speed of light
  double m = 1.0;   ///< species mass
  double e = -1.0;  ///< species charge
  double n0 = 0.0;  ///< neutralising background number density
};

/// Density floor below which closures refuse to evaluate.
inline constexpr double kRhoFloor = 1e-12;

/// Lorentz factor of a momentum u.
inline double gamma(const Vec3& u, double m, double c) { return std::sqrt(1.0 + dot(u, u) / (m * m * c * c)); }

/// Lorentz factor of the fluid, gamma(m M / rho) = sqrt(1 + |M|^2 / (rho c)^2).
inline double fluid_gamma(double rho, const Vec3& M, double c) { return std::sqrt(1.0 + dot(M, M) / (rho * rho * c * c)); }

/// Fluid kinetic energy density rho (gamma - 1) c^2.
inline double fluid_energy_density(double rho, const Vec3& M, double c) {
  const double s = dot(M, M) / (rho * rho * c * c);
  return rho * c * c * s / (std::sqrt(1.0 + s) + 1.0);
}

/// d(energy density)/d rho divided by c^2: gamma - 1 - |M|^2 / (rho^2 c^2 gamma) = 1/gamma - 1.
inline double kinetic_bracket(double rho, const Vec3& M, double c) {
  const double s = dot(M, M) / (rho * rho * c * c);
  const double g = std::sqrt(1.0 + s);
  return -s / ((g + 1.0) * g);
}

/// d(energy density)/dM = M / (rho gamma), the fluid velocity.
inline Vec3 fluid_velocity(double rho, const Vec3& M, double c) { return M / (rho * fluid_gamma(rho, M, c)); }

/// Particle kinetic energy (gamma(U) - 1) m c^2 per unit weight.
inline double particle_energy(const Vec3& u, double m, double c) {
  const double s = dot(u, u) / (m * m * c * c);
  return m * c * c * s / (std::sqrt(1.0 + s) + 1.0);
}

/// Particle velocity U / (m gamma(U)).
inline Vec3 particle_velocity(const Vec3& u, double m, double c) { return u / (m * gamma(u, m, c)); }

}  // namespace coldplasma
