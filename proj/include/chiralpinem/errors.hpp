#pragma once

#include <stdexcept>
#include <string>

namespace chiralpinem {

// Invalid or missing configuration. Messages carry the offending key path
// ("section.key") so CLI users can locate the problem. Exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Two fields that must share a grid do not.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// eps_metal + eps_dielectric = 0 in the SPP dispersion relation.
struct PoleError : std::domain_error {
    explicit PoleError(const std::string& msg) : std::domain_error(msg) {}
};

// Field modulus fell below the noise floor somewhere on a phase-unwrapping loop.
struct UnreliableLoopError : std::runtime_error {
    explicit UnreliableLoopError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fewer than three fringe maxima along the requested cut.
struct InsufficientFringesError : std::runtime_error {
    explicit InsufficientFringesError(const std::string& msg) : std::runtime_error(msg) {}
};

// Zero power in the m = +1 and m = -1 channels; helicity undefined.
struct DegenerateFieldError : std::runtime_error {
    explicit DegenerateFieldError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature did not converge at the requested resolution. Exit code 3.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// An inner operation failed during a delay scan; carries the offending delay.
struct ScanError : std::runtime_error {
    ScanError(double delay_s, const std::string& msg)
        : std::runtime_error("delay " + std::to_string(delay_s * 1e15) + " fs: " + msg),
          delay(delay_s) {}
    double delay;
};

}  // namespace chiralpinem
