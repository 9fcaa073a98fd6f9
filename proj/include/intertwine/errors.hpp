#pragma once

#include <stdexcept>
#include <string>

namespace intertwine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Caller supplied something outside an operation's domain (bad schedule,
// non-involutory parity, EP input to a closed form, malformed config...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A numerical kernel failed: QR non-convergence, overflow, residual contract
// violated.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace intertwine
