#pragma once

#include <stdexcept>
#include <string>

namespace pulseorigin {

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Superposition phase requested at (or too close to) a Bloch-sphere pole.
struct UndefinedPhase : std::runtime_error {
    explicit UndefinedPhase(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form expression evaluated at a pole (e.g. tan at pi/2).
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Fringe phase undefined: the sequence produces zero interference amplitude.
struct DegenerateSequence : std::runtime_error {
    explicit DegenerateSequence(const std::string& what) : std::runtime_error(what) {}
};

// scale_factor_exact called on an open interferometer.
struct OpenInterferometer : std::runtime_error {
    explicit OpenInterferometer(const std::string& what) : std::runtime_error(what) {}
};

// Trapezoidal dead-time undefined (triangular approximation under-estimates).
struct DeadTimeUndefined : std::runtime_error {
    explicit DeadTimeUndefined(const std::string& what) : std::runtime_error(what) {}
};

// Doppler frequency jump placed inside a pulse.
struct UnsupportedTiming : std::runtime_error {
    explicit UnsupportedTiming(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pulseorigin
