#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarmring {

// Raised for violated preconditions: non-finite angles, non-positive gains,
// mismatched grids or agent counts.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a time integrator produces a non-finite state.
class IntegrationDiverged : public std::runtime_error {
public:
    IntegrationDiverged(std::size_t step, const std::string& what)
        : std::runtime_error("integration diverged at step " + std::to_string(step) + ": " + what),
          step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace swarmring
