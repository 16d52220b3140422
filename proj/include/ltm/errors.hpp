#pragma once

#include <stdexcept>
#include <string>

namespace ltm {

// Validation failures (bad arguments, malformed configs, inconsistent inputs)
// are reported as std::invalid_argument. Numerical breakdowns (solver did not
// converge, weights collapsed, non-finite values) get their own type so callers
// can map them to a distinct exit code.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ltm
