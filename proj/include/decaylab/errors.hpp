#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The hypothesis int_M a dx > 0 fails (a == 0): the decay theorems do not apply.
struct TrivialDampingError : std::runtime_error {
    explicit TrivialDampingError(const std::string& what) : std::runtime_error(what) {}
};

// i*tau lies in the spectrum of the generator: the resolvent does not exist there.
struct SpectrumOnAxisError : std::runtime_error {
    SpectrumOnAxisError(double tau, const std::string& what)
        : std::runtime_error(what), tau(tau) {}
    double tau;
};

struct EigensolverError : std::runtime_error {
    explicit EigensolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace decaylab
