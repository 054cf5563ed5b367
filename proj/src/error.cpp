#include "sel/error.hpp"

namespace sel {

ErrorCategory category(Errc code) noexcept {
    switch (code) {
        case Errc::domain:
        case Errc::unsupported:
        case Errc::tail_mass:
        case Errc::support_violation:
        case Errc::infeasible:
        case Errc::stability:
        case Errc::empty_sample:
        case Errc::validation:
            return ErrorCategory::validation;
        default:
            return ErrorCategory::numerical;
    }
}

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::domain: return "domain error";
        case Errc::overflow: return "overflow";
        case Errc::unsupported: return "unsupported";
        case Errc::divergence: return "divergence";
        case Errc::tail_mass: return "tail mass";
        case Errc::support_violation: return "support violation";
        case Errc::infeasible: return "infeasible";
        case Errc::non_convergence: return "non-convergence";
        case Errc::no_root: return "no root";
        case Errc::step_floor: return "step floor";
        case Errc::stability: return "stability";
        case Errc::boundary_leak: return "boundary leak";
        case Errc::monotonicity: return "monotonicity violation";
        case Errc::aliasing: return "aliasing";
        case Errc::constraint_repair: return "constraint repair";
        case Errc::empty_sample: return "empty sample";
        case Errc::validation: return "validation";
    }
    return "error";
}

}  // namespace sel
