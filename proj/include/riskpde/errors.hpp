#pragma once

#include <stdexcept>
#include <string>

namespace riskpde {

/// A diffusion coefficient model admits non-positive realizations.
class PositivityViolation : public std::invalid_argument {
public:
  explicit PositivityViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Armijo backtracking hit its step-reduction cap without an acceptable step.
class StepFailure : public std::runtime_error {
public:
  explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

/// A dense verification solve would exceed its dimension cap.
class DimensionGuard : public std::invalid_argument {
public:
  explicit DimensionGuard(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or out-of-range entry in a run configuration.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace riskpde
