#pragma once

#include <stdexcept>
#include <string>

namespace qdswap {

/// Error categories, mapped onto process exit codes by the CLI runner.
enum class ErrorKind {
  InvalidArgument,        // bad inputs, config parse/validation failures -> exit 2
  Physics,                // untunable pair, detuned scenario, non-physical state -> exit 3
  InsufficientStatistics  // Monte Carlo produced no usable events -> exit 4
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;  // offending config field, if any
};

[[noreturn]] inline void throw_invalid(std::string msg, std::string field = {}) {
  throw Error(ErrorKind::InvalidArgument, std::move(msg), std::move(field));
}

[[noreturn]] inline void throw_physics(std::string msg) {
  throw Error(ErrorKind::Physics, std::move(msg));
}

[[noreturn]] inline void throw_insufficient(std::string msg) {
  throw Error(ErrorKind::InsufficientStatistics, std::move(msg));
}

}  // namespace qdswap
