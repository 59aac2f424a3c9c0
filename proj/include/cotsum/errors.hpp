#pragma once

#include <stdexcept>
#include <string>

namespace cotsum {

// Bad input: out-of-domain argument, non-reduced fraction, zero denominator.
// CLI maps this to exit code 2.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds a configured budget (sieve cap, table size, search budget).
// CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cotsum
