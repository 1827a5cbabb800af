#pragma once

#include <stdexcept>
#include <string>

namespace pswf3d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of a function (e.g. |r| > 1).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Invalid index combination such as ell > m.
class IndexError : public Error {
public:
  using Error::Error;
};

/// Invalid argument value (counts, thresholds, noise levels).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Result not representable in double precision.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Iterative numerical procedure failed or produced a degenerate quantity.
class NumericError : public Error {
public:
  using Error::Error;
};

/// A cutoff left no modes to work with.
class EmptyBasisError : public Error {
public:
  using Error::Error;
};

/// Objects built for different bandwidths were combined.
class BandwidthMismatchError : public ArgumentError {
public:
  using ArgumentError::ArgumentError;
};

/// Text input could not be parsed; carries the offending line number.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Input parsed but violates a consistency rule (e.g. row count vs header).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Binary file with the wrong magic number or version.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Binary file truncated or failing its checksum.
class IntegrityError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace pswf3d
