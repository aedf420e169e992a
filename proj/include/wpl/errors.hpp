#pragma once

#include <stdexcept>

namespace wpl {

/// Input table does not match the expected CSV layout.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Request would exceed a configured resource budget.
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace wpl
