#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sel {

enum class Errc {
    domain,
    overflow,
    unsupported,
    divergence,
    tail_mass,
    support_violation,
    infeasible,
    non_convergence,
    no_root,
    step_floor,
    stability,
    boundary_leak,
    monotonicity,
    aliasing,
    constraint_repair,
    empty_sample,
    validation,
};

// Input problems map to exit code 2, numerical failures to exit code 3.
enum class ErrorCategory { validation, numerical };

ErrorCategory category(Errc code) noexcept;
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

inline void require(bool condition, Errc code, const std::string& message) {
    if (!condition) throw Error(code, message);
}

}  // namespace sel
