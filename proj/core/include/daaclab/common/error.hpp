#ifndef DAACLAB_COMMON_ERROR_HPP_
#define DAACLAB_COMMON_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace daaclab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf inputs or a degenerate probability.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// API misuse, e.g. backward() on a non-scalar.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration text. Carries the 1-based line (0 when not tied to a
// line).
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Checkpoint checksum or magic mismatch.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Structurally malformed binary input; offset is the byte where parsing
// stopped.
class FormatError : public Error {
 public:
  FormatError(std::size_t offset, const std::string& message)
      : Error("offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace daaclab

#endif  // DAACLAB_COMMON_ERROR_HPP_
