#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foilgen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fatal problem with a structured-text document. `byte_offset` points at the
/// first byte the parser could not accept.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error(message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Binary container is truncated or structurally inconsistent.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Magic header or container version does not match this build.
class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// A bundled or user-supplied asset violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation needs corpus data that is not there.
class CorpusError : public Error {
 public:
  using Error::Error;
};

}  // namespace foilgen
