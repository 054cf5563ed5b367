#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sel {

/// Nodes lo, lo + step, ..., lo + (size - 1) * step.
struct UniformGrid {
    double lo = 0.0;
    double step = 1.0;
    std::size_t size = 0;

    double x(std::size_t i) const noexcept { return lo + step * static_cast<double>(i); }
    double hi() const noexcept { return x(size - 1); }

    /// `size` nodes spanning [lo, hi] inclusive.
    static UniformGrid span(double lo, double hi, std::size_t size);
};

/// Density sampled on a uniform grid; each node carries a cell of width step,
/// so mass() = sum(values) * step.
struct GridDensity {
    UniformGrid grid;
    std::vector<double> values;

    double mass() const;
    double expect(const std::function<double(double)>& g) const;
    GridDensity normalized() const;

    static GridDensity tabulate(const UniformGrid& grid, const std::function<double(double)>& f);
};

}  // namespace sel
