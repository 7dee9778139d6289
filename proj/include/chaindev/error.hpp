#pragma once

#include <stdexcept>
#include <string>

namespace chaindev {

/// Input violates a structural requirement (asymmetric matrix, duplicate
/// points, malformed document, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction would exceed the configured number of points/leaves.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chaindev
