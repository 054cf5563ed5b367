#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "sel/grid.hpp"

// Calogero Hamiltonians, their ground-state processes and entropic
// uncertainty on a grid.

namespace sel {

enum class CalogeroForm {
    two_level, // -(1/2) d^2 + (1/2) x^2 + beta(beta-2) / (8 x^2), coupling beta > -1
    singular,  // -d^2 + x^2 + gamma_c / x^2, coupling gamma_c > -1/4
};

struct CalogeroSpec {
    CalogeroForm form = CalogeroForm::singular;
    double coupling = 0.0;

    void validate() const;
    /// Order alpha of the Laguerre eigenfunctions.
    double laguerre_order() const;
};

double spectrum(const CalogeroSpec& spec, int k);

/// Real wavefunction on a uniform grid; norm = sum |psi|^2 step.
struct WaveFunctionGrid {
    UniformGrid grid;
    std::vector<double> values;

    double norm() const;
};

/// Half-line grid with nodes step, 2 step, ..., x_hi (one cell off the origin).
UniformGrid half_line_grid(double x_hi, std::size_t nodes);

/// x^(alpha + 1/2) exp(-x^2/2) L_n^alpha(x^2), normalized on the grid.
WaveFunctionGrid eigenfunction(const CalogeroSpec& spec, int n, const UniformGrid& grid);

/// Normalized harmonic-oscillator state n on a full-line grid.
WaveFunctionGrid hermite_state(int n, const UniformGrid& grid);

/// <f, H f> / <f, f> with second-order differences. On a half-line grid H acts
/// through psi = x^(alpha + 1/2) g, differencing the smooth factor g (its
/// value at the origin extrapolated from the even expansion); psi = 0 beyond
/// the last node.
double rayleigh_quotient(const CalogeroSpec& spec, const WaveFunctionGrid& f);

/// Number of sign changes on the grid, ignoring |psi| below 1e-12 max|psi|.
int sign_changes(const WaveFunctionGrid& f);

/// V = (b^2 + b') / 2 with central differences (one-sided at the ends).
std::vector<double> drift_to_potential(const std::vector<double>& b, double step);

/// exp(2 int_{x_0}^x b) normalized on the grid; the integral is done by quadrature.
GridDensity density_from_drift(const std::function<double(double)>& b, const UniformGrid& grid);

enum class Extension { odd, even };

struct UncertaintyReport {
    double S_q = 0.0;
    double S_p = 0.0;
    double delta_x = 0.0;
    double delta_p = 0.0;
    double boundary_mass_p = 0.0;

    double sum() const noexcept { return S_q + S_p; }
    double product() const noexcept { return delta_x * delta_p; }
    /// S_q + S_p - (1 + ln pi).
    double entropic_slack() const;
    /// dX dP >= exp(S_q + S_p) / (2 pi e) >= 1/2.
    bool heisenberg_chain() const;
    /// 4 dP^2 >= 2 (e pi)^-1 exp(2 S_p) >= 2 e pi exp(-2 S_q) >= dX^-2.
    bool variance_chain() const;
};

/// Position and momentum entropies of a real wavefunction. A half-line state
/// (grid.lo > 0) is first extended to the full line (odd by default) and all
/// quantities refer to the extended state. The momentum density comes from a
/// zero-padded FFT (size: power of two >= 8x the point count). Errc::aliasing
/// when more than 1e-8 of the momentum mass sits in the outer 5% of the window.
UncertaintyReport ground_state_entropies(const WaveFunctionGrid& psi, Extension ext = Extension::odd);

struct ScanRow {
    int n = 0;
    double energy = 0.0;
    UncertaintyReport report;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    bool ground_state_minimal = true; // S_q and S_q + S_p smallest at n = 0
};

ScanResult excited_state_entropy_scan(const CalogeroSpec& spec, int n_max, const UniformGrid& grid,
                                      Extension ext = Extension::odd);
ScanResult harmonic_entropy_scan(int n_max, const UniformGrid& grid);

}  // namespace sel
