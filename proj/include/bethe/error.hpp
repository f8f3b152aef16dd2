#pragma once

#include <stdexcept>
#include <string>

namespace bethe {

// Invalid parameters: bad branching spec, index out of range, malformed input.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

// An internal cross-check failed (multiplicity sum, residual, root count).
// These indicate a numeric or logic bug, never bad user input.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bethe
