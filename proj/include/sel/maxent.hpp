#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sel/densities.hpp"
#include "sel/grid.hpp"

namespace sel {

/// int_a^b x^k rho = m_k for the listed (k, m_k); m_0 = 1 is implied.
struct MomentConstraintSet {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> moments;

    bool half_line() const noexcept { return lo == 0.0 && hi == std::numeric_limits<double>::infinity(); }
    bool full_line() const noexcept { return lo == -hi && hi == std::numeric_limits<double>::infinity(); }
    /// On the half-line with both m_1 and m_2 given: m_1^2 <= m_2 <= 2 m_1^2.
    std::optional<bool> feasibility() const;
    void validate() const;

    nlohmann::json to_json() const;
    static MomentConstraintSet from_json(const nlohmann::json& j);
};

struct MaxentTraceRow {
    int iteration = 0;
    std::vector<double> multipliers;
    double residual = 0.0;
    double objective = 0.0;
};

/// rho*(x) = C exp(-sum_k lambda_k x^k) with C = exp(-lambda_0 - 1).
struct MaxentSolution {
    std::vector<int> powers;          // 0, k_1, ..., k_M
    std::vector<double> multipliers;  // lambda_0, lambda_{k_1}, ...
    std::vector<double> targets;
    std::vector<double> achieved;
    double entropy = 0.0;
    bool converged = false;
    int iterations = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<MaxentTraceRow> trace;

    double multiplier(int k) const;
    double pdf(double x) const;
    nlohmann::json to_json() const;
};

bool feasibility_halfline(double m1, double m2);

/// Damped Newton on the convex dual ln Z(lambda) + sum lambda_k m_k.
/// Throws Errc::infeasible for half-line sets outside m_1^2 <= m_2 <= 2 m_1^2
/// and Errc::non_convergence when max_iter is exhausted. `start` overrides the
/// initial multipliers (ascending k, lambda_0 excluded); by default the solver
/// starts from the exponential or Gaussian matching the lowest moments.
MaxentSolution solve_maxent(const MomentConstraintSet& constraints, double tol = 1e-10, int max_iter = 200,
                            const std::vector<double>& start = {});

/// Auxiliary constraint function: -ln x, or a piecewise-linear table.
struct AuxFunction {
    bool neg_log = true;
    std::vector<double> xs;
    std::vector<double> values;

    double operator()(double x) const;
    static AuxFunction negative_log() { return {}; }
    static AuxFunction tabulated(std::vector<double> xs, std::vector<double> values);
};

struct KLConstraint {
    DensityModel ref;
    AuxFunction T;
    double theta = 0.0;
};

struct KLSolution {
    double lambda = 0.0;
    double C = 1.0;          // 1/C = int rho_ref exp(-lambda T)
    double achieved = 0.0;   // <T> under rho*
    DensityModel ref;
    AuxFunction T;

    double pdf(double x) const;
    GridDensity tabulate(const UniformGrid& grid) const;
};

/// <T> under C rho_ref exp(-lambda T).
double kl_expected_aux(const DensityModel& ref, const AuxFunction& T, double lambda);

/// Bisection + Newton on lambda so that <T>_lambda = theta; <T> decreases in
/// lambda with slope -Var T. Errc::no_root when theta is out of reach.
KLSolution solve_kl_min(const KLConstraint& constraint, double tol = 1e-12);

/// The same family entered by its multiplier instead of theta.
KLSolution kl_family_at(const DensityModel& ref, const AuxFunction& T, double lambda);

/// int_0^inf exp(-alpha x) ln x dx = -(gamma + ln alpha) / alpha.
double log_moment_exponential(double alpha);
/// int_0^inf exp(-alpha x^2) ln x dx = -sqrt(pi / (16 alpha)) (gamma + ln 4 alpha).
double log_moment_gaussian(double alpha);

struct BalianReport {
    int dyson_index = 1;
    int n = 2;
    double scale2 = 1.0;
    std::size_t components = 0;
    double trace_target = 0.0;
    double info_star = 0.0;
    std::vector<double> info_perturbed;
    bool all_greater = true;
    double min_gap = 0.0;

    nlohmann::json to_json() const;
};

/// I[P] = int P ln P for the Gaussian ensemble density and for random
/// trace-preserving perturbations (products of per-element two-Gaussian
/// mixtures rescaled to sum_c w_c <x_c^2> = N a^2 / beta).
BalianReport balian_min_check(int dyson_index, int n, double scale2, std::size_t perturbations, std::uint64_t seed);

}  // namespace sel
