#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "sel/grid.hpp"

// One-dimensional Smoluchowski dynamics d_t rho = D rho'' - (b rho)' with
// b = -V'/(m beta) and D = T/(m beta), k_B = m = 1.

namespace sel {

enum class PotentialKind { flat, harmonic, bistable, bessel_ou };

struct Potential {
    PotentialKind kind = PotentialKind::harmonic;
    double stiffness = 1.0; // harmonic: k x^2 / 2
    double depth = 1.0;     // bistable: depth (x^2 - 1)^2
    int n = 2;              // bessel_ou: (r^2 - (n-1) ln r) / 2, r > 0
    double shift = 0.0;     // additive constant

    double operator()(double x) const;
    std::string name() const;
    static Potential from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ThermoSpec {
    UniformGrid grid;
    Potential potential;
    double temperature = 1.0;
    double friction = 1.0; // m beta
    std::vector<double> V; // potential on the nodes

    double diffusion() const noexcept { return temperature / friction; }
    static ThermoSpec make(const UniformGrid& grid, const Potential& potential, double temperature, double friction);
};

struct GibbsState {
    GridDensity density;
    double Z = 0.0;
    double free_energy = 0.0; // F* = -T ln Z
};

/// Discrete Gibbs density exp(-V/T)/Z with Z = sum exp(-V/T) dx.
GibbsState gibbs_density(const ThermoSpec& spec);

/// Largest dt keeping every diagonal coefficient of the explicit update nonnegative.
double stability_bound(const ThermoSpec& spec);

/// Zero-flux exponentially fitted (Scharfetter-Gummel / Chang-Cooper) update.
/// The discrete Gibbs density is an exact fixed point. Errc::stability above
/// the bound, Errc::boundary_leak when the outward flux into a ghost node
/// beyond either end exceeds 1e-12. A flat potential is a closed box and is
/// never checked for leaks.
GridDensity fp_step(const GridDensity& rho, const ThermoSpec& spec, double dt);

struct ThermoReport {
    double t = 0.0;
    double S = 0.0;
    double U = 0.0;
    double F = 0.0;
    double F_star = 0.0;
    double S_int_rate = 0.0; // (m beta / T) <v^2>
    double Q_rate = 0.0;     // -m beta <b v>
    double H_c = 0.0;        // -sum rho ln(rho / rho*) dx
    double v2 = 0.0;         // <v^2>
    double bv = 0.0;         // <b v>
    std::vector<double> current; // v on the faces
};

/// Face velocities v = b - u with u = D d(ln rho)/dx; averages weight each
/// face by the scheme flux so that D dS/dt = <v^2> - <b v> holds for the
/// semi-discrete dynamics.
ThermoReport thermo_report(const GridDensity& rho, const ThermoSpec& spec, double t = 0.0);

/// Integrates to every report time and checks F nonincreasing, H_c
/// nondecreasing and S_int_rate >= 0 (slack 1e-8); Errc::monotonicity names
/// the offending times.
std::vector<ThermoReport> relaxation_run(const GridDensity& rho0, const ThermoSpec& spec, double dt,
                                         const std::vector<double>& report_times);

/// Largest relative mismatch between D dS/dt (centered differences across
/// reports) and <v^2> - <b v>, over interior reports with <v^2> above floor.
double entropy_balance_error(const std::vector<ThermoReport>& reports, const ThermoSpec& spec,
                             double floor = 1e-8);

}  // namespace sel
