#pragma once

#include <stdexcept>
#include <string>

namespace rnd {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-point range or phase precision is insufficient for the request.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid, sieve or memory cap exceeded.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rational given where an infinite expansion is required.
struct not_applicable_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rnd
