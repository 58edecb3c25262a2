#pragma once

#include <stdexcept>
#include <string>

namespace pradius {

/// Thrown when a Kronecker lift or block assembly would exceed the
/// configured dimension cap. Lifts grow as n^p * m and must fail loudly
/// instead of silently truncating.
class DimensionCapError : public std::runtime_error {
public:
    explicit DimensionCapError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a product enumeration would exceed its N^k budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pradius
