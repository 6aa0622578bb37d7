#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patchlr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input bytes; carries the offset where parsing gave up.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Input ended before the declared number of values was read.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A patch size does not divide one of the image dimensions.
class DivisibilityError : public Error {
 public:
  using Error::Error;
};

/// Matrix or image dimensions are inconsistent with each other.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Requested rank is outside [1, min(rows, cols)].
class RankError : public Error {
 public:
  using Error::Error;
};

/// Input value outside the operation's domain (e.g. a negative entry for NMF).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace patchlr
