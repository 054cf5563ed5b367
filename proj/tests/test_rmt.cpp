#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sel/densities.hpp"
#include "sel/error.hpp"
#include "sel/histogram.hpp"
#include "sel/random.hpp"
#include "sel/rmt.hpp"

using namespace sel;

namespace {

EnsembleSpec spec(int beta, int n, double a2 = 1.0) {
    EnsembleSpec s;
    s.dyson_index = beta;
    s.dim = n;
    s.scale2 = a2;
    return s;
}

double l1_to(const std::vector<double>& xs, SurmiseLabel label) {
    return l1_distance(make_histogram(xs, 50, 0.0, 4.0), DensityModel::surmise(label));
}

}  // namespace

TEST(Ensemble, IndependentElementCount) {
    EXPECT_EQ(spec(1, 2).independent_elements(), 3u);
    EXPECT_EQ(spec(2, 3).independent_elements(), 9u);
    EXPECT_EQ(spec(4, 2).independent_elements(), 6u);
    EXPECT_THROW(spec(3, 2).validate(), Error);
    EXPECT_THROW(spec(4, 3).validate(), Error);
    EXPECT_THROW(spec(1, 1).validate(), Error);
}

TEST(Ensemble, ElementVariances) {
    EXPECT_DOUBLE_EQ(element_variance(spec(1, 2, 2.0), true), 2.0);
    EXPECT_DOUBLE_EQ(element_variance(spec(1, 2, 2.0), false), 1.0);
    EXPECT_DOUBLE_EQ(element_variance(spec(2, 2, 1.0), false), 0.25);
}

TEST(SampleMatrix, EmpiricalVariances) {
    for (int beta : {1, 2, 4}) {
        const auto s = spec(beta, 2, 1.5);
        const std::size_t count = 100000;
        const std::size_t N = s.independent_elements();
        std::vector<double> sum2(N, 0.0);
        Stream rng(21, beta);
        for (std::size_t t = 0; t < count; ++t) {
            const auto c = sample_matrix(s, rng).components();
            ASSERT_EQ(c.size(), N);
            for (std::size_t k = 0; k < N; ++k) sum2[k] += c[k] * c[k];
        }
        for (std::size_t k = 0; k < N; ++k) {
            const double var = element_variance(s, k < 2);
            const double se = var * std::sqrt(2.0 / count);
            EXPECT_NEAR(sum2[k] / count, var, 3.5 * se) << beta << " " << k;
        }
    }
}

TEST(SampleMatrix, HermitianByConstruction) {
    Stream rng(1, 1);
    for (int beta : {1, 2}) {
        for (int n : {2, 3, 6}) EXPECT_TRUE(sample_matrix(spec(beta, n), rng).hermitian());
    }
    EXPECT_TRUE(sample_matrix(spec(4, 2), rng).hermitian());
}

TEST(SampleMatrix, ComponentsRoundTrip) {
    Stream rng(2, 2);
    for (int beta : {1, 2, 4}) {
        const auto s = spec(beta, 2);
        const auto m = sample_matrix(s, rng);
        const auto back = MatrixState::from_components(s, m.components());
        EXPECT_EQ(back.elements, m.elements);
    }
}

TEST(Eigen, SmallExamples) {
    const auto id = symmetric_eigenvalues({1, 0, 0, 0, 1, 0, 0, 0, 1}, 3);
    for (double v : id) EXPECT_NEAR(v, 1.0, 1e-15);
    const auto pm = symmetric_eigenvalues({0, 1, 1, 0}, 2);
    EXPECT_NEAR(pm[0], -1.0, 1e-15);
    EXPECT_NEAR(pm[1], 1.0, 1e-15);
}

TEST(Eigen, TraceIdentities) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 8;
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) a[i * n + j] = a[j * n + i] = g(rng);
        double tr = 0.0, tr2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += a[i * n + i];
        for (double v : a) tr2 += v * v;
        const auto ev = symmetric_eigenvalues(a, n);
        EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
        EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), tr, 1e-10);
        EXPECT_NEAR(std::inner_product(ev.begin(), ev.end(), ev.begin(), 0.0), tr2, 1e-10);
    }
}

TEST(Eigen, ComplexHermitianTraceIdentities) {
    Stream rng(4, 4);
    for (int n : {2, 4, 7}) {
        const auto m = sample_matrix(spec(2, n), rng);
        const auto ev = eigenvalues(m);
        ASSERT_EQ(ev.size(), static_cast<std::size_t>(n));
        EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), m.trace(), 1e-10);
        EXPECT_NEAR(std::inner_product(ev.begin(), ev.end(), ev.begin(), 0.0), m.trace_sq(), 1e-10);
    }
}

TEST(Eigen, QuaternionGapClosedForm) {
    Stream rng(6, 6);
    const auto s = spec(4, 2);
    for (int t = 0; t < 20; ++t) {
        const auto m = sample_matrix(s, rng);
        const auto c = m.components();
        const double gap = 2.0 * std::sqrt(0.25 * (c[0] - c[1]) * (c[0] - c[1]) + c[2] * c[2] + c[3] * c[3] +
                                           c[4] * c[4] + c[5] * c[5]);
        const auto ev = eigenvalues(m);
        ASSERT_EQ(ev.size(), 2u);
        EXPECT_NEAR(ev[1] - ev[0], gap, 1e-10);
    }
}

TEST(Spacing, MatrixConstructionMatchesSurmise) {
    EXPECT_LT(l1_to(spacing_from_matrix(1, 100000, 5), SurmiseLabel::GOE), 0.02);
    EXPECT_LT(l1_to(spacing_from_matrix(2, 100000, 5), SurmiseLabel::GUE), 0.02);
    EXPECT_LT(l1_to(spacing_from_matrix(4, 100000, 5), SurmiseLabel::GSE), 0.02);
}

TEST(Spacing, ComponentConstructionMatchesSurmise) {
    EXPECT_LT(l1_to(spacing_from_components(2, 100000, 6), SurmiseLabel::GOE), 0.02);
    EXPECT_LT(l1_to(spacing_from_components(3, 100000, 6), SurmiseLabel::GUE), 0.02);
    EXPECT_LT(l1_to(spacing_from_components(4, 100000, 6), SurmiseLabel::Ginibre), 0.02);
    EXPECT_LT(l1_to(spacing_from_components(5, 100000, 6), SurmiseLabel::GSE), 0.02);
    EXPECT_THROW(spacing_from_components(6, 10, 6), Error);
}

TEST(Spacing, BothConstructionsAgree) {
    const std::pair<int, int> pairs[] = {{1, 2}, {2, 3}, {4, 5}};
    for (auto [beta, k] : pairs) {
        const auto a = spacing_from_matrix(beta, 100000, 9);
        const auto b = spacing_from_components(k, 100000, 10);
        EXPECT_LT(ks_two_sample(a, b), 0.01) << beta;
    }
}

TEST(Spacing, UnitMeanAndThreadIndependent) {
    set_thread_count(1);
    const auto a = spacing_from_matrix(2, 20000, 77);
    set_thread_count(4);
    const auto b = spacing_from_matrix(2, 20000, 77);
    set_thread_count(0);
    EXPECT_EQ(a, b);
    EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0) / a.size(), 1.0, 1e-12);
}

TEST(JointDensity, Examples) {
    const auto s = spec(1, 2);
    EXPECT_NEAR(joint_eigen_logdensity(s, {-1.0, 1.0}), std::log(2.0) - 1.0, 1e-15);
    EXPECT_EQ(joint_eigen_logdensity(s, {0.5, 0.5}), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(joint_eigen_logdensity(s, {1.0, 0.5}), -std::numeric_limits<double>::infinity());
}

TEST(JointDensity, TranslationOnlyMovesConfinement) {
    const auto s = spec(2, 3, 1.7);
    const std::vector<double> l{-0.4, 0.3, 1.1};
    const double c = 0.6;
    std::vector<double> shifted = l;
    for (auto& v : shifted) v += c;
    const double n = 3.0;
    const double mean = (l[0] + l[1] + l[2]) / 3.0;
    const double expect = -s.dyson_index * (n * c * mean + n * c * c / 2.0) / s.scale2;
    EXPECT_NEAR(joint_eigen_logdensity(s, shifted) - joint_eigen_logdensity(s, l), expect, 1e-12);
}

TEST(MatrixOu, ClassPreservedAndContinuity) {
    const auto s = spec(2, 3);
    Stream rng(3, 3);
    const auto m0 = sample_matrix(s, rng);
    const auto m1 = matrix_ou_step(s, m0, 0.5, rng);
    EXPECT_TRUE(m1.hermitian());
    const auto near = matrix_ou_step(s, m0, 1e-10, rng);
    const auto a = m0.components(), b = near.components();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-4);
    EXPECT_THROW(matrix_ou_step(s, m0, 0.0, rng), Error);
}

TEST(MatrixOu, SemigroupMean) {
    auto s = spec(1, 2);
    s.friction = 2.0;
    const auto m0 = MatrixState::from_components(s, {1.0, -0.5, 0.8});
    const double t = 0.3;
    const std::size_t trials = 100000;
    std::vector<double> mean(3, 0.0);
    Stream rng(12, 0);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto m2 = matrix_ou_step(s, matrix_ou_step(s, m0, t, rng), t, rng);
        const auto c = m2.components();
        for (int k = 0; k < 3; ++k) mean[k] += c[k] / trials;
    }
    const double q = std::exp(-2.0 * t / s.time_scale());
    const auto c0 = m0.components();
    for (int k = 0; k < 3; ++k) {
        const double se = std::sqrt(element_variance(s, k < 2) * (1.0 - q * q) / trials);
        EXPECT_NEAR(mean[k], q * c0[k], 4.0 * se) << k;
    }
}

TEST(MatrixOu, StationaryVariancesKept) {
    const auto s = spec(1, 2, 2.0);
    const std::size_t trials = 100000;
    std::vector<double> sum2(3, 0.0);
    Stream rng(13, 0);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto c = matrix_ou_step(s, sample_matrix(s, rng), 0.7, rng).components();
        for (int k = 0; k < 3; ++k) sum2[k] += c[k] * c[k];
    }
    for (int k = 0; k < 3; ++k) {
        const double var = element_variance(s, k < 2);
        EXPECT_NEAR(sum2[k] / trials, var, 3.5 * var * std::sqrt(2.0 / trials)) << k;
    }
}
