#pragma once

#include <stdexcept>

namespace rideshare {

/// Malformed input: undeclared variables, non-finite data, unparsable files,
/// broken invariants. Distinct from a well-formed but infeasible model.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured work limit (pivots, nodes, enumeration size) was exceeded.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rideshare
