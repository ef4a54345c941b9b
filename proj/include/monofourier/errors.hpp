#pragma once

#include <stdexcept>
#include <string>

namespace mfourier {

/// Invalid user input: bad grid sizes, malformed configs, out-of-range parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its contract (non-convergent projection,
/// non-Hermitian spectrum, Newton failure).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mfourier
