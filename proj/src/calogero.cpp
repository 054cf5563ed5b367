#include "sel/calogero.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "sel/error.hpp"
#include "sel/quadrature.hpp"
#include "sel/special_fns.hpp"

namespace sel {

namespace {

constexpr double kPi = special::pi;
const double kE = std::exp(1.0);

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void CalogeroSpec::validate() const {
    if (form == CalogeroForm::two_level) {
        require(coupling > -1.0, Errc::domain, "two-level coupling must exceed -1");
    } else {
        require(coupling > -0.25, Errc::domain, "singular coupling must exceed -1/4");
    }
    require(std::isfinite(coupling), Errc::domain, "coupling must be finite");
}

double CalogeroSpec::laguerre_order() const {
    validate();
    if (form == CalogeroForm::two_level) return 0.5 * std::sqrt(1.0 + coupling * (coupling - 2.0));
    return 0.5 * std::sqrt(1.0 + 4.0 * coupling);
}

double spectrum(const CalogeroSpec& spec, int k) {
    require(k >= 0, Errc::domain, "level index must be nonnegative");
    const double alpha = spec.laguerre_order();
    if (spec.form == CalogeroForm::two_level) return 2.0 * k + 1.0 + alpha;
    return 4.0 * k + 2.0 + 2.0 * alpha;
}

double WaveFunctionGrid::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s * grid.step;
}

UniformGrid half_line_grid(double x_hi, std::size_t nodes) {
    require(x_hi > 0.0 && nodes >= 2, Errc::validation, "half-line grid needs x_hi > 0 and two nodes");
    const double h = x_hi / static_cast<double>(nodes);
    return {h, h, nodes};
}

namespace {

void normalize(WaveFunctionGrid& f) {
    const double n = f.norm();
    require(n > 0.0 && std::isfinite(n), Errc::divergence, "wavefunction has no finite norm on the grid");
    const double s = 1.0 / std::sqrt(n);
    for (auto& v : f.values) v *= s;
}

}  // namespace

WaveFunctionGrid eigenfunction(const CalogeroSpec& spec, int n, const UniformGrid& grid) {
    require(n >= 0 && n <= 20, Errc::validation, "eigenfunction index must lie in 0..20");
    require(grid.lo > 0.0, Errc::validation, "eigenfunction grid must start off the origin");
    const double alpha = spec.laguerre_order();
    WaveFunctionGrid f{grid, std::vector<double>(grid.size)};
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double x = grid.x(i);
        // log-space prefactor keeps large x from underflowing into 0 * inf
        const double pre = std::exp((alpha + 0.5) * std::log(x) - 0.5 * x * x);
        f.values[i] = pre * special::laguerre(n, alpha, x * x);
    }
    normalize(f);
    return f;
}

WaveFunctionGrid hermite_state(int n, const UniformGrid& grid) {
    require(n >= 0 && n <= 60, Errc::validation, "Hermite index must lie in 0..60");
    WaveFunctionGrid f{grid, std::vector<double>(grid.size)};
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double x = grid.x(i);
        double prev = 0.0;
        double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        f.values[i] = cur;
    }
    normalize(f);
    return f;
}

double rayleigh_quotient(const CalogeroSpec& spec, const WaveFunctionGrid& f) {
    spec.validate();
    const double h = f.grid.step;
    const std::size_t K = f.values.size();
    require(K >= 3, Errc::validation, "wavefunction needs at least three nodes");
    // two-level form is half of the singular operator with gamma_c = beta(beta-2)/4
    const double gamma_c = spec.form == CalogeroForm::two_level ? 0.25 * spec.coupling * (spec.coupling - 2.0)
                                                                : spec.coupling;
    const double scale = spec.form == CalogeroForm::two_level ? 0.5 : 1.0;
    double num = 0.0;
    double den = 0.0;
    if (f.grid.lo <= 0.0) {
        require(gamma_c == 0.0, Errc::validation, "the inverse-square term needs a half-line grid");
        for (std::size_t i = 0; i < K; ++i) {
            const double x = f.grid.x(i);
            const double left = i > 0 ? f.values[i - 1] : 0.0;
            const double right = i + 1 < K ? f.values[i + 1] : 0.0;
            const double hf = -(left - 2.0 * f.values[i] + right) / (h * h) + x * x * f.values[i];
            num += f.values[i] * hf;
            den += f.values[i] * f.values[i];
        }
        return scale * num / den;
    }
    // psi = x^c g with c(c - 1) = gamma_c turns H into x^c (-g'' - 2c g'/x + x^2 g),
    // and g is smooth and even, so differences act on g alone
    const double c = 0.5 + spec.laguerre_order();
    std::vector<double> g(K);
    for (std::size_t i = 0; i < K; ++i) g[i] = f.values[i] / std::pow(f.grid.x(i), c);
    const double g_origin = (4.0 * g[0] - g[1]) / 3.0;
    for (std::size_t i = 0; i < K; ++i) {
        const double x = f.grid.x(i);
        double left;
        if (i > 0) {
            left = g[i - 1];
        } else {
            // node 0 sits one step off the origin
            left = std::abs(x - h) < 1e-12 * h ? g_origin : 0.0;
        }
        const double right = i + 1 < K ? g[i + 1] : 0.0;
        const double g2 = (left - 2.0 * g[i] + right) / (h * h);
        const double g1 = (right - left) / (2.0 * h);
        const double hf = std::pow(x, c) * (-g2 - 2.0 * c * g1 / x + x * x * g[i]);
        num += f.values[i] * hf;
        den += f.values[i] * f.values[i];
    }
    return scale * num / den;
}

int sign_changes(const WaveFunctionGrid& f) {
    double top = 0.0;
    for (double v : f.values) top = std::max(top, std::abs(v));
    int changes = 0;
    int last = 0;
    for (double v : f.values) {
        if (std::abs(v) < 1e-12 * top) continue;
        const int s = v > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

std::vector<double> drift_to_potential(const std::vector<double>& b, double step) {
    require(b.size() >= 3 && step > 0.0, Errc::validation, "drift needs at least three grid values");
    const std::size_t K = b.size();
    std::vector<double> V(K);
    for (std::size_t i = 0; i < K; ++i) {
        double db;
        if (i == 0) db = (-3.0 * b[0] + 4.0 * b[1] - b[2]) / (2.0 * step);
        else if (i + 1 == K) db = (3.0 * b[K - 1] - 4.0 * b[K - 2] + b[K - 3]) / (2.0 * step);
        else db = (b[i + 1] - b[i - 1]) / (2.0 * step);
        V[i] = 0.5 * (b[i] * b[i] + db);
    }
    return V;
}

GridDensity density_from_drift(const std::function<double(double)>& b, const UniformGrid& grid) {
    require(grid.size >= 2, Errc::validation, "grid needs at least two nodes");
    std::vector<double> phi(grid.size, 0.0);
    for (std::size_t i = 1; i < grid.size; ++i) phi[i] = phi[i - 1] + 2.0 * quad::integrate(b, grid.x(i - 1), grid.x(i), 1e-10);
    const double top = *std::max_element(phi.begin(), phi.end());
    GridDensity d{grid, std::vector<double>(grid.size)};
    for (std::size_t i = 0; i < grid.size; ++i) d.values[i] = std::exp(phi[i] - top);
    return d.normalized();
}

double UncertaintyReport::entropic_slack() const { return sum() - (1.0 + std::log(kPi)); }

bool UncertaintyReport::heisenberg_chain() const {
    const double mid = std::exp(sum()) / (2.0 * kPi * kE);
    return product() >= mid * (1.0 - 1e-12) && mid >= 0.5 * (1.0 - 1e-9);
}

bool UncertaintyReport::variance_chain() const {
    const double a = 4.0 * delta_p * delta_p;
    const double b = 2.0 / (kE * kPi) * std::exp(2.0 * S_p);
    const double c = 2.0 * kE * kPi * std::exp(-2.0 * S_q);
    const double d = 1.0 / (delta_x * delta_x);
    const double tol = 1e-9;
    return a >= b * (1.0 - tol) && b >= c * (1.0 - tol) && c >= d * (1.0 - tol);
}

UncertaintyReport ground_state_entropies(const WaveFunctionGrid& psi, Extension ext) {
    require(psi.values.size() >= 4, Errc::validation, "wavefunction grid too small");
    const double h = psi.grid.step;
    std::vector<double> full;
    double x0;
    if (psi.grid.lo > 0.0) {
        // half-line nodes j h, j >= 1: mirror and add the origin
        require(std::abs(psi.grid.lo - h) < 1e-9 * h, Errc::validation, "half-line grid must start at one step");
        const std::size_t K = psi.values.size();
        const double sign = ext == Extension::odd ? -1.0 : 1.0;
        full.reserve(2 * K + 1);
        for (std::size_t j = K; j-- > 0;) full.push_back(sign * psi.values[j]);
        full.push_back(ext == Extension::odd ? 0.0 : psi.values[0]);
        for (double v : psi.values) full.push_back(v);
        x0 = -static_cast<double>(K) * h;
    } else {
        full = psi.values;
        x0 = psi.grid.lo;
    }
    double norm = 0.0;
    for (double v : full) norm += v * v * h;
    require(norm > 0.0, Errc::divergence, "wavefunction vanishes on the grid");
    for (auto& v : full) v /= std::sqrt(norm);
    const std::size_t N = full.size();
    const double edge = std::max(std::abs(full.front()), std::abs(full.back()));
    require(edge < 1e-6, Errc::validation, "wavefunction does not decay inside the grid");

    UncertaintyReport r;
    double mean_x = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double rho = full[j] * full[j];
        const double x = x0 + h * static_cast<double>(j);
        mean_x += x * rho * h;
        if (rho > 0.0) r.S_q -= rho * std::log(rho) * h;
    }
    double var_x = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double x = x0 + h * static_cast<double>(j) - mean_x;
        var_x += x * x * full[j] * full[j] * h;
    }
    r.delta_x = std::sqrt(var_x);

    std::size_t M = 1;
    while (M < 8 * N) M <<= 1;
    std::vector<std::complex<double>> buf(M);
    for (std::size_t j = 0; j < N; ++j) buf[j] = full[j];
    {
        fftw_plan plan;
        {
            std::lock_guard lock(fftw_plan_mutex());
            auto* data = reinterpret_cast<fftw_complex*>(buf.data());
            plan = fftw_plan_dft_1d(static_cast<int>(M), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        std::lock_guard lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    // |psi~(p_k)|^2 = h^2 / (2 pi) |DFT_k|^2, p_k = 2 pi k / (M h)
    const double dp = 2.0 * kPi / (static_cast<double>(M) * h);
    const double scale = h * h / (2.0 * kPi);
    std::vector<double> rho_p(M);
    std::vector<double> p(M);
    for (std::size_t k = 0; k < M; ++k) {
        const auto signed_k = k < M / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(M);
        p[k] = signed_k * dp;
        rho_p[k] = scale * std::norm(buf[k]);
    }
    double mass = 0.0;
    double mean_p = 0.0;
    double outer = 0.0;
    const double p_edge = 0.95 * kPi / h;
    for (std::size_t k = 0; k < M; ++k) {
        mass += rho_p[k] * dp;
        mean_p += p[k] * rho_p[k] * dp;
        if (std::abs(p[k]) > p_edge) outer += rho_p[k] * dp;
    }
    r.boundary_mass_p = outer / mass;
    if (r.boundary_mass_p > 1e-8) {
        throw Error(Errc::aliasing, "momentum density carries " + std::to_string(r.boundary_mass_p) +
                                        " of its mass at the window edge; refine the grid");
    }
    mean_p /= mass;
    double var_p = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
        const double rho = rho_p[k] / mass;
        var_p += (p[k] - mean_p) * (p[k] - mean_p) * rho * dp;
        if (rho > 0.0) r.S_p -= rho * std::log(rho) * dp;
    }
    r.delta_p = std::sqrt(var_p);
    return r;
}

namespace {

void mark_minimal(ScanResult& res) {
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        if (res.rows[i].report.S_q < res.rows[0].report.S_q ||
            res.rows[i].report.sum() < res.rows[0].report.sum()) {
            res.ground_state_minimal = false;
        }
    }
}

}  // namespace

ScanResult excited_state_entropy_scan(const CalogeroSpec& spec, int n_max, const UniformGrid& grid, Extension ext) {
    require(n_max >= 0 && n_max <= 10, Errc::validation, "n_max must lie in 0..10");
    ScanResult res;
    for (int n = 0; n <= n_max; ++n) {
        res.rows.push_back({n, spectrum(spec, n), ground_state_entropies(eigenfunction(spec, n, grid), ext)});
    }
    mark_minimal(res);
    return res;
}

ScanResult harmonic_entropy_scan(int n_max, const UniformGrid& grid) {
    require(n_max >= 0 && n_max <= 10, Errc::validation, "n_max must lie in 0..10");
    ScanResult res;
    for (int n = 0; n <= n_max; ++n) res.rows.push_back({n, n + 0.5, ground_state_entropies(hermite_state(n, grid))});
    mark_minimal(res);
    return res;
}

}  // namespace sel
