#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bisam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (threshold, mu, budgets).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A configured memory or entry budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// File-system failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMeasureError : public Error {
 public:
  using Error::Error;
};

}  // namespace bisam
