#pragma once

#include <stdexcept>
#include <string>

namespace hetcon {

// Bad user input: unknown system/parameter names, malformed config, size mismatches.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent problem structure: dimension mismatches, free-parameter counting
// violations, empty composites.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NewtonDiverged : std::runtime_error {
  NewtonDiverged(const std::string& what, int iterations_, double residual_)
      : std::runtime_error(what), iterations(iterations_), residual(residual_) {}
  int iterations;
  double residual;
};

// Linear solve failed inside Newton; usually signals a bifurcation point or a
// badly posed defining system.
struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reference integrator could not meet its tolerance.
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoBranchPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrthogonalityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WrongStability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContinuationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hetcon
