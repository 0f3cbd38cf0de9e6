#pragma once

#include <stdexcept>
#include <string>

namespace boundary_lab {

// Raised when an enumeration would exceed its configured element budget.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a checked invariant does not hold at runtime.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace boundary_lab
