#include "sel/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sel/error.hpp"
#include "sel/histogram.hpp"

namespace sel {

std::size_t EnsembleSpec::independent_elements() const noexcept {
    const auto n = static_cast<std::size_t>(dim);
    return n + n * (n - 1) * static_cast<std::size_t>(dyson_index) / 2;
}

void EnsembleSpec::validate() const {
    require(dyson_index == 1 || dyson_index == 2 || dyson_index == 4, Errc::validation,
            "dyson index must be 1, 2 or 4");
    require(dim >= 2 && dim <= 64, Errc::validation, "matrix dimension must lie in 2..64");
    require(dyson_index != 4 || dim == 2, Errc::unsupported, "symplectic ensemble only for dim = 2");
    require(scale2 > 0.0 && std::isfinite(scale2), Errc::validation, "a^2 must be positive");
    require(friction > 0.0 && std::isfinite(friction), Errc::validation, "friction must be positive");
}

double element_variance(const EnsembleSpec& spec, bool diagonal) {
    const double v = spec.scale2 / (2.0 * spec.dyson_index);
    return diagonal ? 2.0 * v : v;
}

namespace {

using cplx = std::complex<double>;

// 2x2 complex block of the quaternion q0 + q1 i + q2 j + q3 k.
void put_quaternion(MatrixState& m, std::size_t r, std::size_t c, const double* q, bool adjoint) {
    cplx b[2][2] = {{{q[0], q[1]}, {q[2], q[3]}}, {{-q[2], q[3]}, {q[0], -q[1]}}};
    const std::size_t n = m.order();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.elements[(r + i) * n + c + j] = adjoint ? std::conj(b[j][i]) : b[i][j];
        }
    }
}

}  // namespace

std::vector<double> MatrixState::components() const {
    std::vector<double> out;
    if (dyson_index == 4) {
        const cplx a = at(0, 0);
        const cplx b = at(2, 2);
        out = {a.real(), b.real(), at(0, 2).real(), at(0, 2).imag(), at(0, 3).real(), at(0, 3).imag()};
        return out;
    }
    const auto n = static_cast<std::size_t>(dim);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i, i).real());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out.push_back(at(i, j).real());
            if (dyson_index == 2) out.push_back(at(i, j).imag());
        }
    }
    return out;
}

MatrixState MatrixState::from_components(const EnsembleSpec& spec, const std::vector<double>& comps) {
    require(comps.size() == spec.independent_elements(), Errc::validation, "component count mismatch");
    MatrixState m{spec.dyson_index, spec.dim, {}};
    const std::size_t n = m.order();
    m.elements.assign(n * n, cplx{});
    if (spec.dyson_index == 4) {
        for (std::size_t d = 0; d < 2; ++d) {
            m.elements[d * n + d] = comps[0];
            m.elements[(d + 2) * n + d + 2] = comps[1];
        }
        put_quaternion(m, 0, 2, &comps[2], false);
        put_quaternion(m, 2, 0, &comps[2], true);
        return m;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) m.elements[i * n + i] = comps[k++];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx v{comps[k++], 0.0};
            if (spec.dyson_index == 2) v.imag(comps[k++]);
            m.elements[i * n + j] = v;
            m.elements[j * n + i] = std::conj(v);
        }
    }
    return m;
}

double MatrixState::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order(); ++i) t += at(i, i).real();
    return dyson_index == 4 ? t / 2.0 : t;
}

double MatrixState::trace_sq() const {
    double t = 0.0;
    for (const auto& e : elements) t += std::norm(e);
    return dyson_index == 4 ? t / 2.0 : t;
}

bool MatrixState::hermitian() const {
    for (std::size_t i = 0; i < order(); ++i) {
        for (std::size_t j = i; j < order(); ++j) {
            if (at(i, j) != std::conj(at(j, i))) return false;
        }
    }
    return true;
}

MatrixState sample_matrix(const EnsembleSpec& spec, Stream& stream) {
    spec.validate();
    const double sd_diag = std::sqrt(element_variance(spec, true));
    const double sd_off = std::sqrt(element_variance(spec, false));
    std::vector<double> comps(spec.independent_elements());
    const auto n = static_cast<std::size_t>(spec.dim);
    for (std::size_t i = 0; i < comps.size(); ++i) comps[i] = (i < n ? sd_diag : sd_off) * stream.normal();
    return MatrixState::from_components(spec, comps);
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    require(a.size() == n * n && n >= 1, Errc::validation, "matrix shape mismatch");
    double total = 0.0;
    for (double v : a) total += v * v;
    const double target = 1e-12 * std::sqrt(total);
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };
    int sweep = 0;
    while (off_norm() > target) {
        if (++sweep > 100) throw Error(Errc::non_convergence, "Jacobi eigensolver exceeded 100 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> eigenvalues(const MatrixState& m) {
    const std::size_t k = m.order();
    if (m.dyson_index == 1) {
        std::vector<double> a(k * k);
        for (std::size_t i = 0; i < k * k; ++i) a[i] = m.elements[i].real();
        return symmetric_eigenvalues(std::move(a), k);
    }
    // [[A, -B], [B, A]] for M = A + iB doubles every eigenvalue
    const std::size_t r = 2 * k;
    std::vector<double> a(r * r);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const cplx v = m.at(i, j);
            a[i * r + j] = v.real();
            a[(i + k) * r + j + k] = v.real();
            a[i * r + j + k] = -v.imag();
            a[(i + k) * r + j] = v.imag();
        }
    }
    const auto all = symmetric_eigenvalues(std::move(a), r);
    const std::size_t copies = r / static_cast<std::size_t>(m.dim);
    std::vector<double> ev;
    for (std::size_t i = 0; i < all.size(); i += copies) {
        double s = 0.0;
        for (std::size_t c = 0; c < copies; ++c) s += all[i + c];
        ev.push_back(s / static_cast<double>(copies));
    }
    return ev;
}

std::vector<double> spacing_from_matrix(int dyson_index, std::size_t count, std::uint64_t seed,
                                        std::uint64_t stream_base) {
    const EnsembleSpec spec{dyson_index, 2, 1.0, 1.0};
    spec.validate();
    std::vector<double> gaps(count);
    parallel_draws(count, seed, stream_base, [&](std::size_t i, Stream& s) {
        const MatrixState m = sample_matrix(spec, s);
        if (dyson_index == 4) {
            const auto c = m.components();
            const double half = 0.5 * (c[0] - c[1]);
            gaps[i] = 2.0 * std::sqrt(half * half + c[2] * c[2] + c[3] * c[3] + c[4] * c[4] + c[5] * c[5]);
        } else {
            const auto ev = eigenvalues(m);
            gaps[i] = ev[1] - ev[0];
        }
    });
    if (count > 0) rescale_unit_mean(gaps);
    return gaps;
}

std::vector<double> spacing_from_components(int k, std::size_t count, std::uint64_t seed,
                                            std::uint64_t stream_base) {
    require(k >= 2 && k <= 5, Errc::validation, "component count must lie in 2..5");
    std::vector<double> gaps(count);
    parallel_draws(count, seed, stream_base, [&](std::size_t i, Stream& s) {
        double r2 = 0.0;
        for (int c = 0; c < k; ++c) {
            const double x = s.normal();
            r2 += x * x;
        }
        gaps[i] = std::sqrt(r2);
    });
    if (count > 0) rescale_unit_mean(gaps);
    return gaps;
}

double joint_eigen_logdensity(const EnsembleSpec& spec, const std::vector<double>& lambdas) {
    double repulsion = 0.0;
    double confinement = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) return -std::numeric_limits<double>::infinity();
        confinement += lambdas[i] * lambdas[i];
        for (std::size_t j = i + 1; j < lambdas.size(); ++j) repulsion += std::log(std::abs(lambdas[j] - lambdas[i]));
    }
    return spec.dyson_index * (repulsion - confinement / (2.0 * spec.scale2));
}

MatrixState matrix_ou_step(const EnsembleSpec& spec, const MatrixState& current, double t, Stream& stream) {
    require(t > 0.0, Errc::validation, "OU step needs t > 0");
    const double q = std::exp(-t / spec.time_scale());
    const double w = std::sqrt(-std::expm1(-2.0 * t / spec.time_scale()));
    const MatrixState g = sample_matrix(spec, stream);
    auto a = current.components();
    const auto b = g.components();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = q * a[i] + w * b[i];
    return MatrixState::from_components(spec, a);
}

}  // namespace sel
