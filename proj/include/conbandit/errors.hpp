#pragma once

#include <stdexcept>

namespace conbandit {

/// Bad user-supplied configuration (unknown names, out-of-range values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (length mismatch, bad index).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace conbandit
