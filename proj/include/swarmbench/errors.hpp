#pragma once

#include <stdexcept>
#include <string>

namespace swarmbench {

// Bad scenario/map/parameter data supplied by the caller.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed operation input (e.g. RRT start inside an obstacle).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Zero-distance repulsion source; callers treat this as a collision state.
struct singular_input_error : std::runtime_error {
    explicit singular_input_error(const std::string& what) : std::runtime_error(what) {}
};

// Coordination protocol precondition broken (e.g. rule needs states not on the bus).
struct protocol_error : std::runtime_error {
    explicit protocol_error(const std::string& what) : std::runtime_error(what) {}
};

// Calibration atom outside the closed vocabulary.
struct vocabulary_error : std::runtime_error {
    explicit vocabulary_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace swarmbench
