#pragma once

#include <stdexcept>
#include <string>

namespace meshpix {

// Bad user input: unreadable/malformed files, invalid parameters, dimension
// mismatches. The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical or internal failure (singular system after regularization,
// broken invariant). The CLI maps this to exit code 1.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace meshpix
