#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "sel/densities.hpp"
#include "sel/error.hpp"
#include "sel/maxent.hpp"
#include "sel/special_fns.hpp"

using namespace sel;
using sel::special::euler_gamma;
using sel::special::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MomentConstraintSet halfline(std::vector<std::pair<int, double>> ms) {
    MomentConstraintSet c;
    c.moments = std::move(ms);
    return c;
}

double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-12);
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::validation;
}

}  // namespace

TEST(Feasibility, HalfLineRule) {
    EXPECT_TRUE(feasibility_halfline(1.0, 1.5));
    EXPECT_FALSE(feasibility_halfline(1.0, 2.5));
    EXPECT_TRUE(feasibility_halfline(1.0 / std::sqrt(pi), 0.5));
    EXPECT_FALSE(feasibility_halfline(1.0, 0.9));
    EXPECT_THROW(feasibility_halfline(-1.0, 1.0), Error);
}

TEST(Constraints, Validation) {
    EXPECT_EQ(code_of([] { halfline({}).validate(); }), Errc::validation);
    EXPECT_EQ(code_of([] { halfline({{1, 1.0}, {1, 2.0}}).validate(); }), Errc::validation);
    EXPECT_EQ(code_of([] { halfline({{0, 0.5}}).validate(); }), Errc::validation);
    MomentConstraintSet c = halfline({{1, 1.0}, {2, 1.5}});
    ASSERT_TRUE(c.feasibility().has_value());
    EXPECT_TRUE(*c.feasibility());
    const auto back = MomentConstraintSet::from_json(c.to_json());
    EXPECT_EQ(back.moments, c.moments);
    EXPECT_TRUE(back.half_line());
}

TEST(SolveMaxent, ExponentialFromMean) {
    for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
        const auto sol = solve_maxent(halfline({{1, 1.0 / alpha}}), 1e-12, 200, {alpha * 0.3});
        EXPECT_TRUE(sol.converged);
        EXPECT_NEAR(sol.multiplier(1), alpha, 1e-8 * alpha);
        EXPECT_NEAR(sol.entropy, 1.0 - std::log(alpha), 1e-8);
        EXPECT_NEAR(sol.pdf(0.7), alpha * std::exp(-alpha * 0.7), 1e-8);
    }
}

TEST(SolveMaxent, GaussianOnLine) {
    MomentConstraintSet c;
    c.lo = -kInf;
    c.hi = kInf;
    c.moments = {{1, 0.0}, {2, 2.0}};
    const auto sol = solve_maxent(c, 1e-12, 200, {0.3, 1.0});
    EXPECT_TRUE(sol.converged);
    EXPECT_NEAR(sol.entropy, 0.5 * std::log(2.0 * pi * std::exp(1.0) * 2.0), 1e-9);
    EXPECT_NEAR(sol.multiplier(2), 0.25, 1e-9);
    EXPECT_NEAR(sol.multiplier(1), 0.0, 1e-9);
}

TEST(SolveMaxent, HalfGaussianRecovered) {
    const auto sol = solve_maxent(halfline({{1, 1.0 / std::sqrt(pi)}, {2, 0.5}}), 1e-12);
    EXPECT_TRUE(sol.converged);
    EXPECT_NEAR(sol.multiplier(1), 0.0, 1e-7);
    EXPECT_NEAR(sol.multiplier(2), 1.0, 1e-7);
    for (std::size_t i = 0; i < sol.targets.size(); ++i) EXPECT_NEAR(sol.achieved[i], sol.targets[i], 1e-10);
}

TEST(SolveMaxent, ObjectiveMonotoneAlongTrace) {
    const auto sol = solve_maxent(halfline({{1, 1.0}, {2, 1.6}}), 1e-12);
    ASSERT_GE(sol.trace.size(), 2u);
    for (std::size_t i = 1; i < sol.trace.size(); ++i) EXPECT_LE(sol.trace[i].objective, sol.trace[i - 1].objective + 1e-14);
}

TEST(SolveMaxent, Infeasible) {
    EXPECT_EQ(code_of([] { solve_maxent(halfline({{1, 1.0}, {2, 2.5}})); }), Errc::infeasible);
    EXPECT_EQ(code_of([] { solve_maxent(halfline({{1, 1.0}}), 1e-10, 200, {1.0, 2.0}); }), Errc::validation);
}

TEST(SolveMaxent, BeatsRandomMixtures) {
    // any half-line density with mean 1 has entropy <= 1
    const auto sol = solve_maxent(halfline({{1, 1.0}}), 1e-12);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int t = 0; t < 100; ++t) {
        const double w = u(rng);
        const double a = 0.3 + 2.0 * u(rng);
        const double mean_a = 1.0 / a;
        if (w * mean_a >= 1.0) continue;
        const double b = (1.0 - w) / (1.0 - w * mean_a);
        auto pdf = [&](double x) { return w * a * std::exp(-a * x) + (1.0 - w) * b * std::exp(-b * x); };
        const double S = gk([&](double x) { return -pdf(x) * std::log(pdf(x)); }, 0.0, 200.0);
        EXPECT_LE(S, sol.entropy + 1e-9);
    }
}

TEST(LogMoments, ClosedFormsMatchQuadrature) {
    EXPECT_NEAR(log_moment_exponential(1.0), -euler_gamma, 1e-14);
    EXPECT_NEAR(log_moment_exponential(std::exp(1.0)), -(1.0 + euler_gamma) / std::exp(1.0), 1e-14);
    EXPECT_NEAR(log_moment_gaussian(0.25), -(std::sqrt(pi) / 2.0) * euler_gamma, 1e-14);
    EXPECT_NEAR(log_moment_gaussian(1.0), -0.8700, 1e-4);
    boost::math::quadrature::exp_sinh<double> es;
    for (double a : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double e1 = gk([&](double x) { return x > 0 ? std::exp(-a * x) * std::log(x) : 0.0; }, 0.0, 1.0) +
                          es.integrate([&](double x) { return std::exp(-a * x) * std::log(x); }, 1.0, kInf);
        const double e2 = gk([&](double x) { return x > 0 ? std::exp(-a * x * x) * std::log(x) : 0.0; }, 0.0, 1.0) +
                          es.integrate([&](double x) { return std::exp(-a * x * x) * std::log(x); }, 1.0, kInf);
        EXPECT_NEAR(log_moment_exponential(a), e1, 1e-9) << a;
        EXPECT_NEAR(log_moment_gaussian(a), e2, 1e-9) << a;
    }
    EXPECT_THROW(log_moment_exponential(0.0), Error);
}

TEST(KlMin, ExponentialReferenceGivesSemiPoisson) {
    const auto ref = DensityModel::erlang(2.0, 1);
    const auto T = AuxFunction::negative_log();
    const double theta = kl_expected_aux(ref, T, 1.0);
    const auto sol = solve_kl_min({ref, T, theta});
    EXPECT_NEAR(sol.lambda, 1.0, 1e-8);
    const auto erl = DensityModel::erlang(2.0, 2);
    for (double x = 0.05; x < 8.0; x += 0.1) EXPECT_NEAR(sol.pdf(x), erl.pdf(x), 1e-8);
}

TEST(KlMin, IntegerMultipliersGiveErlang) {
    const auto ref = DensityModel::erlang(1.0, 1);
    for (int n = 2; n <= 5; ++n) {
        const auto sol = kl_family_at(ref, AuxFunction::negative_log(), n - 1.0);
        const auto erl = DensityModel::erlang(1.0, n);
        double sup = 0.0;
        for (double x = 0.01; x < 20.0; x += 0.05) sup = std::max(sup, std::abs(sol.pdf(x) - erl.pdf(x)));
        EXPECT_LT(sup, 1e-8) << n;
    }
}

TEST(KlMin, GaussianReferenceGivesWigner) {
    const auto ref = DensityModel::half_line_gaussian(0.5);
    const auto sol = kl_family_at(ref, AuxFunction::negative_log(), 1.0);
    const auto target = DensityModel::bessel_ou(2);
    for (double x = 0.05; x < 4.0; x += 0.1) EXPECT_NEAR(sol.pdf(x), target.pdf(x), 1e-8);
}

TEST(KlMin, ReferenceMeanGivesZeroMultiplier) {
    const auto ref = DensityModel::erlang(1.0, 1);
    const auto sol = solve_kl_min({ref, AuxFunction::negative_log(), euler_gamma});
    EXPECT_NEAR(sol.lambda, 0.0, 1e-8);
    EXPECT_NEAR(sol.C, 1.0, 1e-8);
}

TEST(KlMin, MeanDecreasesInMultiplier) {
    const auto ref = DensityModel::surmise(SurmiseLabel::GOE);
    double prev = kl_expected_aux(ref, AuxFunction::negative_log(), -1.5);
    for (double lam = -1.0; lam < 4.0; lam += 0.5) {
        const double cur = kl_expected_aux(ref, AuxFunction::negative_log(), lam);
        EXPECT_LT(cur, prev);
        prev = cur;
    }
}

TEST(KlMin, UnreachableTargetHasNoRoot) {
    const auto T = AuxFunction::tabulated({0.0, 1.0, 10.0}, {0.0, 1.0, 1.0});
    EXPECT_EQ(code_of([&] { solve_kl_min({DensityModel::erlang(1.0, 1), T, 5.0}); }), Errc::no_root);
}

TEST(Balian, ClosedFormAndPerturbations) {
    const auto r0 = balian_min_check(1, 2, 1.0, 0, 3);
    EXPECT_EQ(r0.components, 3u);
    const double expect = -(2.0 * 0.5 * (1.0 + std::log(2.0 * pi)) + 0.5 * (1.0 + std::log(pi)));
    EXPECT_NEAR(r0.info_star, expect, 1e-10);

    const auto r = balian_min_check(1, 2, 1.0, 50, 3);
    EXPECT_EQ(r.info_perturbed.size(), 50u);
    EXPECT_TRUE(r.all_greater);
    for (double v : r.info_perturbed) EXPECT_GT(v, r.info_star);

    const auto r2 = balian_min_check(1, 2, 2.0, 0, 3);
    EXPECT_NEAR(r2.info_star - r0.info_star, -0.5 * 3.0 * std::log(2.0), 1e-10);
}

TEST(Balian, OtherClasses) {
    for (int beta : {2, 4}) {
        const auto r = balian_min_check(beta, 2, 1.0, 20, 11);
        EXPECT_TRUE(r.all_greater) << beta;
        EXPECT_EQ(r.components, static_cast<std::size_t>(2 + beta));
    }
}
