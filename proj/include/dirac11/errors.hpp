#pragma once

#include <stdexcept>
#include <string>

namespace d11 {

// Non-finite values or a constraint abort during time stepping.
struct InstabilityError : std::runtime_error {
    int step;
    InstabilityError(int s, const std::string& what)
        : std::runtime_error("instability at step " + std::to_string(s) + ": " + what), step(s)
    {
    }
};

} // namespace d11
