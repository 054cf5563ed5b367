#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "sel/densities.hpp"
#include "sel/entropy.hpp"
#include "sel/error.hpp"
#include "sel/special_fns.hpp"

using namespace sel;
using sel::special::euler_gamma;
using sel::special::pi;

namespace {

CoarseGrid grid_of(std::vector<double> masses) {
    CoarseGrid g;
    g.masses = std::move(masses);
    return g;
}

double oracle_entropy(const DensityModel& m) {
    auto f = [&](double s) {
        const double p = m.pdf(s);
        return p > 0.0 ? -p * std::log(p) : 0.0;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, m.upper_cutoff(), 20, 1e-13);
}

}  // namespace

TEST(DiscreteEntropy, Examples) {
    EXPECT_NEAR(discrete_entropy(grid_of(std::vector<double>(16, 1.0 / 16))), std::log(16.0), 1e-14);
    EXPECT_EQ(discrete_entropy(grid_of({1.0, 0.0, 0.0})), 0.0);
    EXPECT_NEAR(discrete_entropy(grid_of({0.25, 0.75})), 0.5623351446188083, 1e-15);
}

TEST(DiscreteEntropy, Bounds) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> m(1 + t % 37);
        for (auto& x : m) x = u(rng);
        const double s = std::accumulate(m.begin(), m.end(), 0.0);
        for (auto& x : m) x /= s;
        const double h = discrete_entropy(grid_of(m));
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, std::log(static_cast<double>(m.size())) + 1e-12);
    }
}

TEST(DifferentialEntropy, Examples) {
    EXPECT_NEAR(differential_entropy(DensityModel::erlang(1.0, 1)), 1.0, 1e-10);
    EXPECT_NEAR(differential_entropy(DensityModel::half_line_gaussian(pi / 2.0)),
                0.5 * (std::log(pi * pi / 4.0) + 1.0), 1e-10);
    EXPECT_NEAR(differential_entropy(DensityModel::surmise(SurmiseLabel::GUE)), 0.52880, 5e-5);
}

TEST(DifferentialEntropy, MatchesGaussKronrodOracle) {
    for (const auto& m : surmise_catalog()) EXPECT_NEAR(differential_entropy(m), oracle_entropy(m), 1e-9) << m.label();
}

TEST(DifferentialEntropy, NegativeValuesAllowed) {
    EXPECT_LT(differential_entropy(DensityModel::erlang(10.0, 1)), 0.0);
}

TEST(DifferentialEntropy, GridMatchesModel) {
    const auto m = DensityModel::surmise(SurmiseLabel::GOE);
    const auto g = GridDensity::tabulate(UniformGrid::span(0.0, 8.0, 8001), [&](double s) { return m.pdf(s); });
    EXPECT_NEAR(differential_entropy(g.normalized()), differential_entropy(m), 1e-5);
}

TEST(DimensionlessEntropy, Identity) {
    const auto goe = DensityModel::surmise(SurmiseLabel::GOE);
    EXPECT_NEAR(dimensionless_entropy(goe, 1.0), differential_entropy(goe), 1e-12);
    EXPECT_NEAR(dimensionless_entropy(DensityModel::erlang(1.0, 1), std::exp(1.0)), 0.0, 1e-10);
    EXPECT_NEAR(dimensionless_entropy(goe, 0.1), differential_entropy(goe) + std::log(10.0), 1e-12);
    for (double d : {1e-3, 0.5, 7.0}) {
        EXPECT_NEAR(dimensionless_entropy(goe, d) + std::log(d), differential_entropy(goe), 1e-12);
    }
    EXPECT_THROW(dimensionless_entropy(goe, 0.0), Error);
}

TEST(CoarseGrain, MassesSumToOne) {
    const CoarseGrid g = coarse_grain(DensityModel::erlang(1.0, 1), 20.0, 2000);
    EXPECT_EQ(g.cells(), 2000u);
    EXPECT_NEAR(std::accumulate(g.masses.begin(), g.masses.end(), 0.0), 1.0, 1e-12);
    for (double m : g.masses) EXPECT_GE(m, 0.0);
    EXPECT_DOUBLE_EQ(g.cell_width(), 0.01);
}

TEST(CoarseGrain, GoeLimit) {
    const auto goe = DensityModel::surmise(SurmiseLabel::GOE);
    const CoarseGrid g = coarse_grain(goe, 6.0, 600);
    EXPECT_NEAR(discrete_entropy(g) + std::log(0.01), differential_entropy(goe), 5e-3);
}

TEST(CoarseGrain, RefinementErrorDecreases) {
    const auto p0 = DensityModel::surmise(SurmiseLabel::P0);
    const double S = differential_entropy(p0);
    double prev = 1e300;
    for (std::size_t N = 64; N <= 4096; N *= 2) {
        const CoarseGrid g = coarse_grain(p0, 8.0, N);
        const double err = std::abs(discrete_entropy(g) + std::log(g.cell_width()) - S);
        EXPECT_LT(err, prev) << N;
        prev = err;
    }
}

TEST(CoarseGrain, SmoothCatalogRatios) {
    for (const auto& m : surmise_catalog()) {
        const double L = m.upper_cutoff(1e-16);
        const double S = differential_entropy(m);
        double prev = 0.0;
        for (std::size_t N = 64; N <= 4096; N *= 2) {
            const CoarseGrid g = coarse_grain(m, L, N);
            const double err = std::abs(discrete_entropy(g) + std::log(g.cell_width()) - S);
            EXPECT_LE(discrete_entropy(g), std::log(static_cast<double>(N)));
            if (N > 64) EXPECT_LE(err / prev, 0.75) << m.label() << " " << N;
            prev = err;
        }
    }
}

TEST(CoarseGrain, TailMassError) {
    try {
        coarse_grain(DensityModel::erlang(1.0, 1), 5.0, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::tail_mass);
    }
    EXPECT_THROW(coarse_grain(DensityModel::erlang(1.0, 1), 20.0, 0), Error);
}

TEST(KL, Examples) {
    const auto goe = DensityModel::surmise(SurmiseLabel::GOE);
    EXPECT_NEAR(kl_divergence(goe, goe), 0.0, 1e-12);
    EXPECT_NEAR(kl_divergence(DensityModel::erlang(2.0, 2), DensityModel::erlang(1.0, 1)),
                std::log(2.0) - euler_gamma, 1e-10);
    const auto p0 = DensityModel::surmise(SurmiseLabel::P0);
    const double a = kl_divergence(goe, p0), b = kl_divergence(p0, goe);
    EXPECT_GT(a, 0.0);
    EXPECT_GT(b, 0.0);
    EXPECT_GT(std::abs(a - b), 1e-3);
}

TEST(KL, GibbsInequalityOnRandomPairs) {
    const auto cat = surmise_catalog();
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t i = pick(rng), j = pick(rng);
        const double d = kl_divergence(cat[i], cat[j]);
        if (i == j) {
            EXPECT_NEAR(d, 0.0, 1e-12);
        } else {
            EXPECT_GT(d, 1e-6) << cat[i].label() << " " << cat[j].label();
        }
    }
}

TEST(KL, GridSupportViolation) {
    const UniformGrid grid = UniformGrid::span(0.0, 4.0, 401);
    const auto rho = GridDensity::tabulate(grid, [](double s) { return std::exp(-s); }).normalized();
    const auto ref = GridDensity::tabulate(grid, [](double s) { return s < 2.0 ? 1.0 : 0.0; }).normalized();
    try {
        kl_divergence(rho, ref);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::support_violation);
    }
    EXPECT_NEAR(kl_divergence(rho, rho), 0.0, 1e-14);
}
