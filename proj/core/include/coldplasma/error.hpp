#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldplasma {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: degenerate meshes, unsupported spaces, mismatched sizes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Krylov solve did not reach its tolerance or met negative curvature.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Density fell below the floor at a quadrature point.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, std::size_t cell, double value)
      : Error(what), cell_(cell), value_(value) {}
  std::size_t cell() const { return cell_; }
  double value() const { return value_; }

 private:
  std::size_t cell_;
  double value_;
};

/// Fixed-point iteration ran out of iterations (and of dt halvings).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace coldplasma
