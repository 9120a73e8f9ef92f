#pragma once

#include <stdexcept>
#include <string>

namespace huff {

// Spec or constraint violation (bad length, odd b, unknown catalog key, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Overflow, divergence, loss of realness.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace huff
