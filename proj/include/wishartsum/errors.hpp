#pragma once

#include <stdexcept>
#include <string>

namespace wishartsum {

/// Raised when an iteration fails to converge or a result is not
/// representable (series cap hit, eigensolver stall, non-finite value).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a determinant has collapsed because sigma_B values are too
/// close for the non-degenerate formulas; the degenerate evaluator applies.
class conditioning_error : public numerical_error {
 public:
  explicit conditioning_error(const std::string& what) : numerical_error(what) {}
};

}  // namespace wishartsum
