#pragma once

#include <stdexcept>
#include <string>

namespace pdc {

// No real (theta_t, theta_h) pair satisfies the k-vector matching condition
// at the requested wavelengths and crystal cut.
struct NotPhaseMatchableError : std::domain_error {
    explicit NotPhaseMatchableError(const std::string& what)
        : std::domain_error(what)
    {
    }
};

// Conditional efficiency exceeds the loss-budget product, which would imply
// a heralding efficiency above one. Signals inconsistent inputs.
struct SuperUnityHeraldingError : std::domain_error {
    explicit SuperUnityHeraldingError(const std::string& what)
        : std::domain_error(what)
    {
    }
};

// Configuration file problem; the message names the offending key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what)
        : std::runtime_error(what)
    {
    }
};

} // namespace pdc
