#pragma once

#include <stdexcept>
#include <string>

namespace multinorm {

/// Malformed input document (bad JSON, unknown keys, wrong shapes).
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally valid input that violates a documented precondition,
/// e.g. a tower whose kernels do not intersect trivially.
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A consistency check that can only fail on an implementation bug.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace multinorm
