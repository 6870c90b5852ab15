#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wearauth {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV rows, timestamps, config values).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input violates a uniqueness constraint (e.g. duplicate subject+timestamp).
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// A value is outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Feature selection kept nothing; downstream stages cannot proceed.
class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

/// Bad or missing configuration; maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wearauth
