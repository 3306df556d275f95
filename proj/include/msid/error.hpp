#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msid {

/// Failure categories shared by every module. The CLI maps these to exit codes.
enum class ErrorKind {
  dimension,        ///< non-conformal matrix shapes
  instability,      ///< spectral radius >= 1 where stationarity is required
  covariance,       ///< covariance-role matrix not symmetric / PSD / PD
  convergence,      ///< iteration cap exceeded
  singularity,      ///< numerically singular matrix in a solve
  non_stabilizing,  ///< DARE solution does not stabilize A - KC
  parameter,        ///< bad scalar argument (tau < 1, index out of range, ...)
  length,           ///< series too short for the requested operation
  size,             ///< model exceeds the state-dimension guardrail
  degeneracy,       ///< non-positive variance where a logarithm is taken
  conditioning,     ///< rank-deficient regression design
  schema,           ///< malformed input document
  io,               ///< file could not be read or written
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace msid
