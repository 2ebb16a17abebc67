#pragma once

#include <stdexcept>
#include <string>

namespace hypersg {

/// Malformed input: bad dimensions, broken simplex invariants, bad JSON shapes.
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// A theta value outside the declared observation space.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A required game assumption does not hold for the requested operation.
struct AssumptionError : std::runtime_error {
  explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

/// Work would exceed a declared enumeration/node budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Empty grids, unusable plans and similar configuration problems.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver-internal inconsistencies that should never surface in normal use.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace hypersg
