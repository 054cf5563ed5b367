#include <gtest/gtest.h>

#include <cmath>

#include "sel/calogero.hpp"
#include "sel/error.hpp"
#include "sel/special_fns.hpp"

using namespace sel;
using sel::special::pi;

namespace {

CalogeroSpec singular(double g) { return {CalogeroForm::singular, g}; }
CalogeroSpec two_level(double b) { return {CalogeroForm::two_level, b}; }

double inner(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s * a.grid.step;
}

}  // namespace

TEST(Spectrum, Examples) {
    EXPECT_DOUBLE_EQ(spectrum(two_level(2.0), 0), 1.5);
    for (double b : {1.0, 2.0, 3.0, 4.0}) EXPECT_NEAR(spectrum(two_level(b), 0), (b + 1.0) / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(spectrum(singular(0.0), 0), 3.0);
    EXPECT_DOUBLE_EQ(spectrum(singular(2.0), 1), 4.0 + 2.0 + 3.0);
    EXPECT_NEAR(spectrum(two_level(3.0), 2), 4.0 + 1.0 + 1.0, 1e-15);
}

TEST(Spectrum, CouplingRange) {
    try {
        spectrum(singular(-0.3), 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::domain);
    }
    EXPECT_THROW(spectrum(two_level(-1.5), 0), Error);
    EXPECT_NO_THROW(spectrum(singular(-0.2), 0));
}

TEST(Eigenfunction, GroundStateValue) {
    const auto grid = half_line_grid(10.0, 5000);
    const auto f = eigenfunction(singular(0.0), 0, grid);
    EXPECT_NEAR(f.norm(), 1.0, 1e-12);
    const std::size_t i = 499;
    ASSERT_NEAR(grid.x(i), 1.0, 1e-12);
    EXPECT_NEAR(f.values[i], std::sqrt(4.0 / std::sqrt(pi)) * std::exp(-0.5), 1e-8);
}

TEST(Eigenfunction, Orthogonality) {
    const auto grid = half_line_grid(10.0, 5000);
    for (double g : {0.0, 1.0, 3.0}) {
        const auto f0 = eigenfunction(singular(g), 0, grid);
        const auto f1 = eigenfunction(singular(g), 1, grid);
        EXPECT_NEAR(inner(f0, f1), 0.0, 1e-8) << g;
    }
}

TEST(Eigenfunction, NodeCount) {
    const auto grid = half_line_grid(10.0, 5000);
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(sign_changes(eigenfunction(singular(1.0), n, grid)), n);
    const auto full = UniformGrid::span(-10.0, 10.0, 2001);
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(sign_changes(hermite_state(n, full)), n);
}

TEST(Rayleigh, MatchesSpectrum) {
    const auto grid = half_line_grid(10.0, 5000);
    for (double g : {0.0, 1.0, 2.0, 3.0})
        for (int n = 0; n <= 3; ++n) {
            const auto spec = singular(g);
            EXPECT_NEAR(rayleigh_quotient(spec, eigenfunction(spec, n, grid)), spectrum(spec, n), 1e-4);
        }
    for (double b : {1.0, 2.0, 3.0, 4.0})
        for (int n = 0; n <= 3; ++n) {
            const auto spec = two_level(b);
            EXPECT_NEAR(rayleigh_quotient(spec, eigenfunction(spec, n, grid)), spectrum(spec, n), 1e-4);
        }
    const auto full = UniformGrid::span(-10.0, 10.0, 4001);
    EXPECT_NEAR(rayleigh_quotient(singular(0.0), hermite_state(2, full)), 5.0, 1e-4);
    EXPECT_THROW(rayleigh_quotient(singular(1.0), hermite_state(0, full)), Error);
}

TEST(DriftPotential, Examples) {
    const auto grid = UniformGrid::span(0.5, 3.0, 2501);
    std::vector<double> b(grid.size), b3(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double x = grid.x(i);
        b[i] = -x;
        b3[i] = 1.5 / x - x;
    }
    const auto V = drift_to_potential(b, grid.step);
    const auto V3 = drift_to_potential(b3, grid.step);
    for (std::size_t i = 1; i + 1 < grid.size; i += 50) {
        const double x = grid.x(i);
        EXPECT_NEAR(V[i], 0.5 * (x * x - 1.0), 1e-10);
        EXPECT_NEAR(V3[i], 0.5 * (3.0 / (4.0 * x * x) + x * x) - 2.0, 1e-4);
    }
    EXPECT_NEAR(V3[grid.size * 1 / 5], -1.125, 1e-5);
}

TEST(DriftPotential, DensityFromDrift) {
    const auto grid = half_line_grid(6.0, 3000);
    const double beta = 3.0;
    const auto rho = density_from_drift([&](double x) { return beta / (2.0 * x) - x; }, grid);
    const double ref = rho.values[500] / (std::pow(grid.x(500), beta) * std::exp(-grid.x(500) * grid.x(500)));
    for (std::size_t i = 10; i < 2000; i += 97) {
        const double x = grid.x(i);
        EXPECT_NEAR(rho.values[i] / (std::pow(x, beta) * std::exp(-x * x)) / ref, 1.0, 1e-8);
    }
    EXPECT_NEAR(rho.mass(), 1.0, 1e-12);
}

TEST(Uncertainty, HarmonicSaturation) {
    const auto full = UniformGrid::span(-10.0, 10.0, 2001);
    const auto r = ground_state_entropies(hermite_state(0, full));
    EXPECT_NEAR(r.sum(), 1.0 + std::log(pi), 1e-4);
    EXPECT_NEAR(r.product(), 0.5, 1e-6);
    EXPECT_TRUE(r.heisenberg_chain());
    EXPECT_TRUE(r.variance_chain());
}

TEST(Uncertainty, SingularGroundState) {
    const auto grid = half_line_grid(10.0, 5000);
    const auto r = ground_state_entropies(eigenfunction(singular(2.0), 0, grid));
    EXPECT_GT(r.entropic_slack(), 0.0);
    EXPECT_GE(r.product(), std::exp(r.sum()) / (2.0 * pi * std::exp(1.0)));
    EXPECT_TRUE(r.heisenberg_chain());
    EXPECT_TRUE(r.variance_chain());
    const auto even = ground_state_entropies(eigenfunction(singular(2.0), 0, grid), Extension::even);
    EXPECT_NEAR(even.S_q, r.S_q, 1e-10);
    EXPECT_GT(even.entropic_slack(), 0.0);
}

TEST(Uncertainty, AliasingDetected) {
    const auto coarse = UniformGrid::span(-10.0, 10.0, 21);
    try {
        ground_state_entropies(hermite_state(10, coarse));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::aliasing);
    }
}

TEST(Scan, HarmonicEntropyGrows) {
    const auto full = UniformGrid::span(-12.0, 12.0, 2401);
    const auto scan = harmonic_entropy_scan(5, full);
    ASSERT_EQ(scan.rows.size(), 6u);
    for (int n = 1; n <= 5; ++n) EXPECT_GT(scan.rows[n].report.S_q, scan.rows[n - 1].report.S_q);
    EXPECT_TRUE(scan.ground_state_minimal);
}

TEST(Scan, SingularCoupling) {
    const auto grid = half_line_grid(10.0, 5000);
    const auto scan = excited_state_entropy_scan(singular(1.0), 3, grid);
    ASSERT_EQ(scan.rows.size(), 4u);
    EXPECT_LT(scan.rows[0].report.S_q, scan.rows[1].report.S_q);
    for (const auto& row : scan.rows) {
        EXPECT_GT(row.report.entropic_slack(), 0.0);
        EXPECT_TRUE(row.report.variance_chain());
        EXPECT_DOUBLE_EQ(row.energy, spectrum(singular(1.0), row.n));
    }
}

TEST(Scan, SingleRow) {
    const auto grid = half_line_grid(10.0, 5000);
    const auto scan = excited_state_entropy_scan(singular(2.0), 0, grid);
    ASSERT_EQ(scan.rows.size(), 1u);
    const auto direct = ground_state_entropies(eigenfunction(singular(2.0), 0, grid));
    EXPECT_DOUBLE_EQ(scan.rows[0].report.S_q, direct.S_q);
    EXPECT_DOUBLE_EQ(scan.rows[0].report.S_p, direct.S_p);
    EXPECT_THROW(excited_state_entropy_scan(singular(2.0), 11, grid), Error);
}
