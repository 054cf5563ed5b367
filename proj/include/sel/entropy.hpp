#pragma once

#include <cstddef>
#include <vector>

#include "sel/densities.hpp"
#include "sel/grid.hpp"

namespace sel {

/// Partition of [0, L] into N equal cells with cell masses summing to one.
struct CoarseGrid {
    double interval_length = 1.0;
    std::vector<double> masses;

    std::size_t cells() const noexcept { return masses.size(); }
    double cell_width() const noexcept { return interval_length / static_cast<double>(masses.size()); }
};

/// -sum mu_j ln mu_j over cells with positive mass; lies in [0, ln N].
double discrete_entropy(const CoarseGrid& grid);

/// -int rho ln rho. May be negative (a localization measure rather than an
/// information count).
double differential_entropy(const DensityModel& model);
double differential_entropy(const GridDensity& density);

/// -int rho ln(delta * rho) = differential_entropy - ln delta.
double dimensionless_entropy(const DensityModel& model, double delta);
double dimensionless_entropy(const GridDensity& density, double delta);

/// Exact cell masses of `model` on [0, L] split into N cells, renormalized.
/// Throws Errc::tail_mass when more than 1e-6 of the mass lies beyond L.
CoarseGrid coarse_grain(const DensityModel& model, double L, std::size_t N);

/// int rho ln(rho / ref) >= 0.
double kl_divergence(const DensityModel& rho, const DensityModel& ref);
double kl_divergence(const GridDensity& rho, const GridDensity& ref);

}  // namespace sel
