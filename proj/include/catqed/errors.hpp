// errors.hpp: Exception types shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace catqed {

// Malformed or inconsistent user input (config keys, parameter ranges).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// NaN/Inf, truncation breach, failed convergence. The CLI maps these to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock space too small for the dynamics.
struct TruncationError : NumericalError {
    using NumericalError::NumericalError;
};

// A postselection outcome whose probability is zero to working precision.
struct ImpossibleOutcome : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace catqed
