#pragma once

#include <stdexcept>
#include <string>

namespace safezone {

// Raised when an input violates a documented contract (invalid chain, bad
// parameter range, exceeded oracle guard, malformed file, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace safezone
