#pragma once

#include <stdexcept>
#include <string>

namespace levelset {

/// A configuration value is missing, malformed or refers to an unknown family.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested moment order violates the finiteness condition, or the
/// admissible exponent window is empty. The message names the inequality.
class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// A series, quadrature or search ran out of budget before reaching tolerance.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levelset
