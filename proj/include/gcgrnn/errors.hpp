#pragma once

#include <stdexcept>
#include <string>

namespace gcgrnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid or degenerate numeric input (asymmetric distances, zero std, ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// API misuse: a precondition the caller controls was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message names the offending row where possible.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (bad key, missing path, dimension mismatch).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcgrnn
