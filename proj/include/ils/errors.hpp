#pragma once

#include <stdexcept>
#include <string>

namespace ils {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented range (p, eps, lambda, c, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Planes or images with incompatible shapes or channel counts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, root-finder failure, oversize dense solves.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File codec failures: unknown format, malformed header, short payload.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ils
