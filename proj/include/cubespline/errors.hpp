#pragma once

#include <stdexcept>
#include <string>

namespace cubespline {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: the caller handed us something that violates a documented
/// precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SizeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OrderingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateSegmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Failures of the environment or of a numerical procedure rather than of
/// the input. Exit code 1 at the CLI.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

class EnvironmentError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class SingularityError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class InitializationError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

class IoError : public RuntimeFailure {
 public:
  IoError(const std::string& what, std::size_t rows_written)
      : RuntimeFailure(what + " (" + std::to_string(rows_written) + " rows written)"),
        rows_written_(rows_written) {}

  std::size_t rows_written() const noexcept { return rows_written_; }

 private:
  std::size_t rows_written_;
};

}  // namespace cubespline
