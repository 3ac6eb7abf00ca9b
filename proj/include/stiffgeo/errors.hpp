#pragma once

#include <stdexcept>

namespace stiffgeo {

// Raised when a computation leaves the region where it is defined:
// a vanishing potential, a point outside a model, an empty model.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed textual input (model strings, JSON, vectors).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stiffgeo
