#pragma once

#include <stdexcept>
#include <string>

namespace nsgrowth {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive time step fell below the configured minimum.
class StallError : public Error {
 public:
  using Error::Error;
};

/// NaN or infinity detected in a field.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Negative density produced in strict mode.
class NegativeDensityError : public Error {
 public:
  using Error::Error;
};

/// Input fields that do not share a grid.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; the message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace nsgrowth
