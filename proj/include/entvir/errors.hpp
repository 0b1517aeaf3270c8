#pragma once

#include <stdexcept>
#include <string>

namespace entvir {

// Convergence failures, pairing-match failures and similar runtime
// breakdowns of the numerics; contract violations use std::invalid_argument.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entvir
