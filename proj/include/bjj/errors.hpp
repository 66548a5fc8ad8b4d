#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bjj {

/// Raised for out-of-domain arguments (atom numbers, rates, grid sizes).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The operation is well posed but not implemented for this configuration.
class UnsupportedConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for failures of the numerical kernels (exit code 3 in the CLI).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A propagation step whose local error estimate exceeded tolerance.
class StepRejected : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// |<Lx>| vanished; phase-referenced criteria are undefined on this state.
class PhaseReferenceLost : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Collects every problem found while parsing a configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> messages);

    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::vector<std::string> messages_;
};

}  // namespace bjj
