#pragma once

#include <stdexcept>
#include <string>

namespace osg {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A physical parameter or grid field violates its documented constraint.
class InvalidParameter : public Error {
 public:
  InvalidParameter(const std::string& field, const std::string& constraint)
      : Error("invalid parameter '" + field + "': " + constraint), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Malformed, incomplete, or self-contradictory scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dynamics and distributions are defined for t >= 0 only.
class NegativeTime : public Error {
 public:
  explicit NegativeTime(double t)
      : Error("time must be nonnegative, got " + std::to_string(t) + " s") {}
};

// Requested a quantity that exists only after the cavity exit (t >= T).
class TimeBeforeExit : public Error {
 public:
  TimeBeforeExit(double t, double transit_time)
      : Error("defined only for t >= transit time (" + std::to_string(transit_time) +
              " s), got t = " + std::to_string(t) + " s") {}
};

// A measurement-conditioned quantity was asked for without a measurement.
class UnconditionedOutcome : public Error {
 public:
  UnconditionedOutcome()
      : Error("operation requires a zero-photon or one-photon measurement outcome") {}
};

// The spatial grid fails to capture the state (probability at the window
// edge, or initial support not covered).
class GridTooNarrow : public Error {
 public:
  using Error::Error;
};

// Momentum content reaches the edge of the band representable on the grid.
class NyquistOverflow : public Error {
 public:
  using Error::Error;
};

// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace osg
