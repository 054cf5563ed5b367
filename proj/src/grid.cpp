#include "sel/grid.hpp"

#include <cmath>

#include "sel/error.hpp"

namespace sel {

UniformGrid UniformGrid::span(double lo, double hi, std::size_t size) {
    require(size >= 2, Errc::validation, "grid needs at least two nodes");
    require(hi > lo, Errc::validation, "grid needs hi > lo");
    return {lo, (hi - lo) / static_cast<double>(size - 1), size};
}

double GridDensity::mass() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total * grid.step;
}

double GridDensity::expect(const std::function<double(double)>& g) const {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) total += values[i] * g(grid.x(i));
    return total * grid.step;
}

GridDensity GridDensity::normalized() const {
    const double m = mass();
    require(m > 0.0 && std::isfinite(m), Errc::validation, "grid density has no positive finite mass");
    GridDensity out = *this;
    for (auto& v : out.values) v /= m;
    return out;
}

GridDensity GridDensity::tabulate(const UniformGrid& grid, const std::function<double(double)>& f) {
    GridDensity out{grid, std::vector<double>(grid.size)};
    for (std::size_t i = 0; i < grid.size; ++i) out.values[i] = f(grid.x(i));
    return out;
}

}  // namespace sel
