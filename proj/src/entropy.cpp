#include "sel/entropy.hpp"

#include <cmath>
#include <string>

#include "sel/error.hpp"
#include "sel/quadrature.hpp"

namespace sel {

double discrete_entropy(const CoarseGrid& grid) {
    double s = 0.0;
    for (double mu : grid.masses) {
        if (mu > 0.0) s -= mu * std::log(mu);
    }
    return s;
}

double differential_entropy(const DensityModel& model) {
    return quad::integrate_halfline([&](double s) {
        const double lp = model.log_pdf(s);
        if (!std::isfinite(lp)) return 0.0;  // 0 ln 0 = 0
        const double p = std::exp(lp);
        return p == 0.0 ? 0.0 : -p * lp;
    });
}

double differential_entropy(const GridDensity& density) {
    double s = 0.0;
    for (double v : density.values) {
        require(v >= 0.0, Errc::validation, "grid density has negative values");
        if (v > 0.0) s -= v * std::log(v);
    }
    return s * density.grid.step;
}

double dimensionless_entropy(const DensityModel& model, double delta) {
    require(delta > 0.0, Errc::domain, "partition unit must be positive");
    return differential_entropy(model) - std::log(delta);
}

double dimensionless_entropy(const GridDensity& density, double delta) {
    require(delta > 0.0, Errc::domain, "partition unit must be positive");
    return differential_entropy(density) - std::log(delta);
}

CoarseGrid coarse_grain(const DensityModel& model, double L, std::size_t N) {
    require(L > 0.0, Errc::validation, "interval length must be positive");
    require(N >= 1, Errc::validation, "need at least one cell");
    const double tail = model.survival(L);
    if (tail >= 1e-6) {
        throw Error(Errc::tail_mass, "mass " + std::to_string(tail) + " beyond L = " + std::to_string(L));
    }
    CoarseGrid grid{L, std::vector<double>(N)};
    const double width = L / static_cast<double>(N);
    double total = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double a = width * static_cast<double>(j);
        const double b = j + 1 == N ? L : width * static_cast<double>(j + 1);
        // difference the smaller tail to keep relative accuracy in both ends
        const double lower_a = model.cdf(a);
        const double mu = lower_a < 0.5 ? model.cdf(b) - lower_a : model.survival(a) - model.survival(b);
        grid.masses[j] = std::max(mu, 0.0);
        total += grid.masses[j];
    }
    for (auto& mu : grid.masses) mu /= total;
    return grid;
}

double kl_divergence(const DensityModel& rho, const DensityModel& ref) {
    const double upper = rho.upper_cutoff(1e-14);
    for (int i = 1; i <= 1000; ++i) {
        const double s = upper * i / 1000.0;
        if (rho.pdf(s) > 0.0 && !std::isfinite(ref.log_pdf(s))) {
            throw Error(Errc::support_violation, rho.label() + " has mass where " + ref.label() + " vanishes");
        }
    }
    const double value = quad::integrate_halfline([&](double s) {
        const double lp = rho.log_pdf(s);
        if (!std::isfinite(lp)) return 0.0;
        const double p = std::exp(lp);
        return p == 0.0 ? 0.0 : p * (lp - ref.log_pdf(s));
    });
    return std::max(value, 0.0);
}

double kl_divergence(const GridDensity& rho, const GridDensity& ref) {
    require(rho.values.size() == ref.values.size() && rho.grid.lo == ref.grid.lo &&
                rho.grid.step == ref.grid.step,
            Errc::validation, "kl_divergence needs densities on the same grid");
    double total = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
        const double p = rho.values[i];
        if (p <= 0.0) continue;
        const double q = ref.values[i];
        if (q < 1e-300) {
            throw Error(Errc::support_violation,
                        "reference vanishes at x = " + std::to_string(rho.grid.x(i)) + " where rho > 0");
        }
        total += p * std::log(p / q);
    }
    return std::max(total * rho.grid.step, 0.0);
}

}  // namespace sel
