#pragma once

#include <stdexcept>
#include <string>

namespace kqc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to a library call (dimension mismatch, out-of-range index, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A series or iteration failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace kqc
