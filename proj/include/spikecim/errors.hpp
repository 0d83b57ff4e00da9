#pragma once

#include <stdexcept>
#include <string>

namespace spikecim {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration or argument values outside their allowed range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Digital value or weight code that cannot be represented.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Cell resistance that does not match any programmable state.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// File system and stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spikecim
