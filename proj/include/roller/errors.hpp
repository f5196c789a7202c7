#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace roller {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument at an API boundary (out-of-range command, negative speed, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Scenario/config validation failure. `field` is the dotted path of the
// offending entry, e.g. "wheel.radius"; it is embedded in what() as well.
class ValidationError : public Error {
 public:
  ValidationError(std::string field_path, const std::string& what)
      : Error(field_path + ": " + what), field(std::move(field_path)) {}
  std::string field;
};

// Least-squares fit could not be performed (rank deficiency, too few samples).
class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(what) {}
};

// Attitude entered the gimbal-lock guard band.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(what) {}
};

// State left the operational envelope of a guarded model.
class GuardError : public Error {
 public:
  explicit GuardError(const std::string& what) : Error(what) {}
};

// Thrust allocation infeasible. Carries the unclamped solution so callers can
// decide how to degrade.
class AllocationError : public Error {
 public:
  AllocationError(const std::string& what, std::array<double, 4> unclamped_thrusts)
      : Error(what), unclamped(unclamped_thrusts) {}
  std::array<double, 4> unclamped;
};

// Actuator limit exceeded at the API boundary. Carries the clamped suggestion.
class SaturationError : public Error {
 public:
  SaturationError(const std::string& what, double clamped_torque, double clamped_speed)
      : Error(what), clamped_tau(clamped_torque), clamped_omega(clamped_speed) {}
  double clamped_tau;
  double clamped_omega;
};

// Brute-force enumeration would exceed the configured cap.
class EnumerationCapError : public Error {
 public:
  explicit EnumerationCapError(const std::string& what) : Error(what) {}
};

}  // namespace roller
