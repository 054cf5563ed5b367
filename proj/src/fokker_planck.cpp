#include "sel/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sel/error.hpp"

namespace sel {

namespace {

constexpr double kFloor = 1e-300;

// Bernoulli function w / (e^w - 1), B(0) = 1, B(+inf) = 0.
double bernoulli(double w) {
    if (std::isinf(w)) return w > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (std::abs(w) < 1e-8) return 1.0 - 0.5 * w;
    return w / std::expm1(w);
}

}  // namespace

double Potential::operator()(double x) const {
    switch (kind) {
        case PotentialKind::flat: return shift;
        case PotentialKind::harmonic: return 0.5 * stiffness * x * x + shift;
        case PotentialKind::bistable: return depth * (x * x - 1.0) * (x * x - 1.0) + shift;
        case PotentialKind::bessel_ou:
            if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
            return 0.5 * (x * x - (n - 1) * std::log(x)) + shift;
    }
    return 0.0;
}

std::string Potential::name() const {
    switch (kind) {
        case PotentialKind::flat: return "flat";
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::bistable: return "bistable";
        case PotentialKind::bessel_ou: return "bessel_ou_n";
    }
    return "unknown";
}

Potential Potential::from_json(const nlohmann::json& j) {
    Potential p;
    const auto id = j.value("id", std::string("harmonic"));
    if (id == "flat") p.kind = PotentialKind::flat;
    else if (id == "harmonic") p.kind = PotentialKind::harmonic;
    else if (id == "bistable") p.kind = PotentialKind::bistable;
    else if (id == "bessel_ou_n" || id == "bessel_ou") p.kind = PotentialKind::bessel_ou;
    else throw Error(Errc::validation, "unknown potential '" + id + "'");
    p.stiffness = j.value("stiffness", 1.0);
    p.depth = j.value("depth", 1.0);
    p.n = j.value("n", 2);
    p.shift = j.value("shift", 0.0);
    require(p.stiffness > 0.0 && p.depth > 0.0, Errc::validation, "potential parameters must be positive");
    require(p.kind != PotentialKind::bessel_ou || p.n >= 2, Errc::validation, "bessel_ou_n needs n >= 2");
    return p;
}

nlohmann::json Potential::to_json() const {
    nlohmann::json j{{"id", name()}, {"shift", shift}};
    if (kind == PotentialKind::harmonic) j["stiffness"] = stiffness;
    if (kind == PotentialKind::bistable) j["depth"] = depth;
    if (kind == PotentialKind::bessel_ou) j["n"] = n;
    return j;
}

ThermoSpec ThermoSpec::make(const UniformGrid& grid, const Potential& potential, double temperature,
                            double friction) {
    require(grid.size >= 3 && grid.step > 0.0, Errc::validation, "grid needs at least three nodes");
    require(temperature > 0.0 && friction > 0.0, Errc::validation, "temperature and friction must be positive");
    ThermoSpec s{grid, potential, temperature, friction, {}};
    s.V.resize(grid.size);
    for (std::size_t k = 0; k < grid.size; ++k) {
        s.V[k] = potential(grid.x(k));
        require(std::isfinite(s.V[k]), Errc::validation, "potential must be finite on the grid");
    }
    return s;
}

GibbsState gibbs_density(const ThermoSpec& spec) {
    const double vmin = *std::min_element(spec.V.begin(), spec.V.end());
    GibbsState g;
    g.density.grid = spec.grid;
    g.density.values.resize(spec.V.size());
    double z = 0.0;
    for (std::size_t k = 0; k < spec.V.size(); ++k) {
        g.density.values[k] = std::exp(-(spec.V[k] - vmin) / spec.temperature);
        z += g.density.values[k];
    }
    z *= spec.grid.step;
    for (auto& v : g.density.values) v /= z;
    g.Z = z * std::exp(-vmin / spec.temperature);
    g.free_energy = -spec.temperature * (std::log(z) - vmin / spec.temperature);
    return g;
}

double stability_bound(const ThermoSpec& spec) {
    const std::size_t K = spec.V.size();
    const double h = spec.grid.step;
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        double out = 0.0;
        if (k + 1 < K) out += bernoulli((spec.V[k + 1] - spec.V[k]) / spec.temperature);
        if (k > 0) out += bernoulli(-(spec.V[k] - spec.V[k - 1]) / spec.temperature);
        worst = std::max(worst, out);
    }
    return h * h / (spec.diffusion() * worst);
}

namespace {

// F_{k+1/2} for k = 0..K-2.
std::vector<double> face_fluxes(const std::vector<double>& rho, const ThermoSpec& spec) {
    const std::size_t K = rho.size();
    const double c = spec.diffusion() / spec.grid.step;
    std::vector<double> f(K - 1);
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double w = (spec.V[k + 1] - spec.V[k]) / spec.temperature;
        f[k] = c * (bernoulli(w) * rho[k] - bernoulli(-w) * rho[k + 1]);
    }
    return f;
}

void check_leak(const std::vector<double>& rho, const ThermoSpec& spec) {
    if (spec.potential.kind == PotentialKind::flat) return;
    const double c = spec.diffusion() / spec.grid.step;
    const std::size_t K = rho.size();
    const double v_left = spec.potential(spec.grid.x(0) - spec.grid.step);
    const double v_right = spec.potential(spec.grid.x(K - 1) + spec.grid.step);
    const double left = c * bernoulli((v_left - spec.V[0]) / spec.temperature) * rho[0];
    const double right = c * bernoulli((v_right - spec.V[K - 1]) / spec.temperature) * rho[K - 1];
    if (left > 1e-12 || right > 1e-12) {
        std::ostringstream msg;
        msg << "outward boundary flux " << std::max(left, right) << " exceeds 1e-12; widen the domain";
        throw Error(Errc::boundary_leak, msg.str());
    }
}

}  // namespace

GridDensity fp_step(const GridDensity& rho, const ThermoSpec& spec, double dt) {
    require(rho.values.size() == spec.V.size(), Errc::validation, "density and potential grids differ");
    require(dt > 0.0, Errc::validation, "dt must be positive");
    const double bound = stability_bound(spec);
    if (dt > bound * (1.0 + 1e-12)) {
        throw Error(Errc::stability, "dt = " + std::to_string(dt) + " exceeds the stability bound " +
                                         std::to_string(bound));
    }
    check_leak(rho.values, spec);
    const auto f = face_fluxes(rho.values, spec);
    GridDensity out{rho.grid, rho.values};
    const double r = dt / spec.grid.step;
    const std::size_t K = out.values.size();
    for (std::size_t k = 0; k < K; ++k) {
        const double in_right = k + 1 < K ? f[k] : 0.0;
        const double in_left = k > 0 ? f[k - 1] : 0.0;
        out.values[k] = std::max(0.0, rho.values[k] - r * (in_right - in_left));
    }
    return out;
}

ThermoReport thermo_report(const GridDensity& rho, const ThermoSpec& spec, double t) {
    const std::size_t K = rho.values.size();
    require(K == spec.V.size(), Errc::validation, "density and potential grids differ");
    const double h = spec.grid.step;
    const double T = spec.temperature;
    const double D = spec.diffusion();
    const auto gibbs = gibbs_density(spec);
    ThermoReport r;
    r.t = t;
    std::vector<double> logr(K);
    for (std::size_t k = 0; k < K; ++k) logr[k] = std::log(std::max(rho.values[k], kFloor));
    for (std::size_t k = 0; k < K; ++k) {
        const double p = rho.values[k];
        r.S -= p * logr[k] * h;
        r.U += p * spec.V[k] * h;
        r.H_c -= p * (logr[k] - std::log(std::max(gibbs.density.values[k], kFloor))) * h;
    }
    r.F = r.U - T * r.S;
    r.F_star = gibbs.free_energy;
    const auto f = face_fluxes(rho.values, spec);
    r.current.resize(K - 1);
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double b = -(spec.V[k + 1] - spec.V[k]) / (spec.friction * h);
        const double u = D * (logr[k + 1] - logr[k]) / h;
        const double v = b - u;
        r.current[k] = v;
        r.v2 += f[k] * v * h;
        r.bv += f[k] * b * h;
    }
    r.S_int_rate = spec.friction / T * r.v2;
    r.Q_rate = -spec.friction * r.bv;
    return r;
}

std::vector<ThermoReport> relaxation_run(const GridDensity& rho0, const ThermoSpec& spec, double dt,
                                         const std::vector<double>& report_times) {
    require(dt > 0.0, Errc::validation, "dt must be positive");
    for (std::size_t i = 0; i < report_times.size(); ++i) {
        require(report_times[i] >= 0.0 && (i == 0 || report_times[i] > report_times[i - 1]), Errc::validation,
                "report times must be nonnegative and increasing");
    }
    std::vector<ThermoReport> reports;
    GridDensity rho = rho0;
    double t = 0.0;
    for (double target : report_times) {
        while (t < target - 1e-12) {
            const double step = std::min(dt, target - t);
            rho = fp_step(rho, spec, step);
            t = (target - t - step < 1e-12) ? target : t + step;
        }
        reports.push_back(thermo_report(rho, spec, target));
    }
    constexpr double slack = 1e-8;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& cur = reports[i];
        if (cur.S_int_rate < -slack) {
            throw Error(Errc::monotonicity, "negative entropy production at t = " + std::to_string(cur.t));
        }
        if (i == 0) continue;
        const auto& prev = reports[i - 1];
        if (cur.F > prev.F + slack) {
            throw Error(Errc::monotonicity, "free energy increased between t = " + std::to_string(prev.t) +
                                                " and t = " + std::to_string(cur.t));
        }
        if (cur.H_c < prev.H_c - slack) {
            throw Error(Errc::monotonicity, "conditional KL entropy decreased between t = " + std::to_string(prev.t) +
                                                " and t = " + std::to_string(cur.t));
        }
    }
    return reports;
}

double entropy_balance_error(const std::vector<ThermoReport>& reports, const ThermoSpec& spec, double floor) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < reports.size(); ++i) {
        const auto& r = reports[i];
        if (r.v2 <= floor) continue;
        const double dS = (reports[i + 1].S - reports[i - 1].S) / (reports[i + 1].t - reports[i - 1].t);
        const double lhs = spec.diffusion() * dS;
        const double rhs = r.v2 - r.bv;
        worst = std::max(worst, std::abs(lhs - rhs) / (r.v2 + std::abs(r.bv)));
    }
    return worst;
}

}  // namespace sel
