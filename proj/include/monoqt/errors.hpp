#pragma once

#include <stdexcept>
#include <string>

namespace monoqt {

// Error hierarchy. The CLI maps these onto stable exit codes:
//   argument_error / contract_error -> 2 (invalid input)
//   capacity_error                  -> 3 (resource limit)
//   unsupported_error               -> 4 (usage / unsupported combination)
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// caller passed a value outside the documented domain
struct argument_error : error {
    explicit argument_error(const std::string& msg) : error(msg) {}
};

// input data violates a structural invariant (non-Hermitian, non-normalized, ...)
struct contract_error : error {
    explicit contract_error(const std::string& msg) : error(msg) {}
};

// configured size/resource limit exceeded
struct capacity_error : error {
    explicit capacity_error(const std::string& msg) : error(msg) {}
};

// requested a combination the library deliberately does not implement
struct unsupported_error : error {
    explicit unsupported_error(const std::string& msg) : error(msg) {}
};

} // namespace monoqt
