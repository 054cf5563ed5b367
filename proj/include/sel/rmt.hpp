#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sel/random.hpp"

// Gaussian matrix ensembles and their 2x2 spacing statistics.

namespace sel {

struct EnsembleSpec {
    int dyson_index = 1;   // 1, 2 or 4
    int dim = 2;
    double scale2 = 1.0;   // a^2
    double friction = 1.0; // nu; only a^2 * nu enters the OU time scale

    /// N = n + n(n-1) beta / 2.
    std::size_t independent_elements() const noexcept;
    double time_scale() const noexcept { return scale2 * friction; }
    void validate() const;
};

/// Variance of one independent real component: a^2 / beta on the diagonal,
/// a^2 / (2 beta) for each off-diagonal component.
double element_variance(const EnsembleSpec& spec, bool diagonal);

/// A sampled Hermitian matrix stored densely (row-major, complex). For
/// beta = 4 the 2x2 quaternion-real matrix [[a, q], [conj(q), b]] is held in
/// its 4x4 complex representation.
struct MatrixState {
    int dyson_index = 1;
    int dim = 2;
    std::vector<std::complex<double>> elements;

    std::size_t order() const noexcept { return dyson_index == 4 ? 2 * dim : dim; }
    std::complex<double> at(std::size_t i, std::size_t j) const { return elements[i * order() + j]; }

    /// The N independent real components, diagonal entries first.
    std::vector<double> components() const;
    /// Rebuilds the dense matrix from independent components.
    static MatrixState from_components(const EnsembleSpec& spec, const std::vector<double>& comps);

    double trace() const;
    /// Tr M^2 of the n x n matrix (the beta = 4 representation counts each
    /// quaternion entry once).
    double trace_sq() const;
    bool hermitian() const;
};

MatrixState sample_matrix(const EnsembleSpec& spec, Stream& stream);

/// Cyclic Jacobi on a dense real symmetric matrix (row-major, n x n). Stops
/// once the off-diagonal Frobenius norm drops below 1e-12 ||A||; throws
/// Errc::non_convergence after 100 sweeps. Ascending order.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

/// Sorted eigenvalues of the n x n matrix; complex matrices go through the
/// real doubling embedding and are deduplicated.
std::vector<double> eigenvalues(const MatrixState& m);

/// |lambda_2 - lambda_1| for 2x2 draws, batch rescaled to unit mean.
std::vector<double> spacing_from_matrix(int dyson_index, std::size_t count, std::uint64_t seed,
                                        std::uint64_t stream_base = 0);

/// Norm of k independent unit Gaussians, batch rescaled to unit mean.
std::vector<double> spacing_from_components(int k, std::size_t count, std::uint64_t seed,
                                            std::uint64_t stream_base = 0);

/// beta [sum_{i<j} ln|l_i - l_j| - sum l_i^2 / (2 a^2)]; -inf unless strictly increasing.
double joint_eigen_logdensity(const EnsembleSpec& spec, const std::vector<double>& lambdas);

/// Exact OU transition M(t) = q M' + sqrt(1 - q^2) G, q = exp(-t / (a^2 nu)).
MatrixState matrix_ou_step(const EnsembleSpec& spec, const MatrixState& current, double t, Stream& stream);

}  // namespace sel
