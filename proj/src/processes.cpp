#include "sel/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "sel/error.hpp"
#include "sel/special_fns.hpp"

namespace sel {

void SdeConfig::validate() const {
    require(dt_min > 0.0 && dt_min <= dt_base && std::isfinite(dt_base), Errc::validation,
            "need 0 < dt_min <= dt_base");
    require(noise_scale >= 0.0, Errc::validation, "noise scale must be nonnegative");
    require(max_refine >= 0 && max_refine <= 60, Errc::validation, "max_refine must lie in 0..60");
}

double bessel_drift(int n, double r) { return (n - 1) / (2.0 * r); }

double bessel_ou_drift(int n, double r) { return (n - 1) / (2.0 * r) - r; }

double bessel_ou_potential(int n, double r) { return 0.5 * (r * r - (n - 1) * std::log(r)); }

namespace {

// Adaptive policy: before drawing noise, halve dt (at most max_refine times)
// until the drift displacement is at most this fraction of the distance to the
// nearest singularity.
constexpr double kDriftFraction = 0.1;

template <class Drift>
TrajectoryState radial_step(int n, const TrajectoryState& state, const SdeConfig& cfg, Stream& stream,
                            StepStats* stats, Drift drift) {
    require(n >= 2, Errc::validation, "radial processes need n >= 2");
    require(state.positions.size() == 1 && state.positions[0] > 0.0, Errc::validation,
            "radial state must be a single positive position");
    const double r = state.positions[0];
    double dt0 = cfg.dt_base;
    if (cfg.adaptive) {
        const double d = std::abs(drift(n, r));
        for (int k = 0; k < cfg.max_refine && d * dt0 > kDriftFraction * r; ++k) dt0 *= 0.5;
    }
    for (double dt = dt0;; dt *= 0.5) {
        if (dt < cfg.dt_min) throw Error(Errc::step_floor, "no admissible radial move above dt_min");
        const double proposal = r + drift(n, r) * dt + cfg.noise_scale * std::sqrt(dt) * stream.normal();
        if (proposal > 0.0 && std::isfinite(proposal)) {
            if (stats) ++stats->accepted;
            return {state.t + dt, {proposal}};
        }
        if (stats) ++stats->rejected;
        if (!cfg.adaptive) throw Error(Errc::step_floor, "radial move crossed zero");
    }
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

}  // namespace

TrajectoryState bessel_step(int n, const TrajectoryState& state, const SdeConfig& cfg, Stream& stream,
                            StepStats* stats) {
    return radial_step(n, state, cfg, stream, stats, bessel_drift);
}

TrajectoryState bessel_ou_step(int n, const TrajectoryState& state, const SdeConfig& cfg, Stream& stream,
                               StepStats* stats) {
    return radial_step(n, state, cfg, stream, stats, bessel_ou_drift);
}

double bessel_ou_transition_logpdf(int n, double r_from, double r_to, double t) {
    require(n >= 2, Errc::validation, "transition kernel needs n >= 2");
    require(r_from > 0.0 && r_to > 0.0 && t > 0.0, Errc::domain, "transition kernel needs positive arguments");
    const double alpha = 0.5 * (n - 2);
    const double q = std::exp(-t);
    const double one_m_q2 = -std::expm1(-2.0 * t);
    const double z = 2.0 * r_from * r_to * q / one_m_q2;
    return std::log(2.0) + (n - 1) * std::log(r_to) - r_to * r_to - std::log(one_m_q2) -
           (r_to * r_to + r_from * r_from) * q * q / one_m_q2 - alpha * (std::log(r_to * r_from) - t) +
           special::log_bessel_i(alpha, z);
}

double bessel_ou_transition_pdf(int n, double r_from, double r_to, double t) {
    return std::exp(bessel_ou_transition_logpdf(n, r_from, r_to, t));
}

std::vector<double> dyson_drift(const EnsembleSpec& spec, const std::vector<double>& lambdas) {
    const double beta = spec.dyson_index;
    std::vector<double> d(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        double repulsion = 0.0;
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            if (i != j) repulsion += 1.0 / (lambdas[j] - lambdas[i]);
        d[j] = -beta / (2.0 * spec.scale2) * lambdas[j] + 0.5 * beta * repulsion;
    }
    return d;
}

TrajectoryState dyson_step(const EnsembleSpec& spec, const TrajectoryState& state, const SdeConfig& cfg,
                           Stream& stream, StepStats* stats) {
    require(strictly_increasing(state.positions), Errc::validation, "Dyson state must be strictly increasing");
    const auto drift = dyson_drift(spec, state.positions);
    std::vector<double> next(state.positions.size());
    double dt0 = cfg.dt_base;
    if (cfg.adaptive) {
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < state.positions.size(); ++j)
            gap = std::min(gap, state.positions[j] - state.positions[j - 1]);
        double push = 0.0;
        for (double d : drift) push = std::max(push, std::abs(d));
        for (int k = 0; k < cfg.max_refine && push * dt0 > kDriftFraction * gap; ++k) dt0 *= 0.5;
    }
    for (double dt = dt0;; dt *= 0.5) {
        if (dt < cfg.dt_min) throw Error(Errc::step_floor, "no order-preserving Dyson move above dt_min");
        const double sq = cfg.noise_scale * std::sqrt(dt);
        for (std::size_t j = 0; j < next.size(); ++j)
            next[j] = state.positions[j] + drift[j] * dt + sq * stream.normal();
        if (strictly_increasing(next)) {
            if (stats) ++stats->accepted;
            return {state.t + dt, next};
        }
        if (stats) ++stats->rejected;
        if (!cfg.adaptive) throw Error(Errc::step_floor, "Dyson move broke the eigenvalue ordering");
    }
}

ProcessKind process_from_string(const std::string& name) {
    if (name == "bessel") return ProcessKind::bessel;
    if (name == "bessel_ou") return ProcessKind::bessel_ou;
    if (name == "dyson") return ProcessKind::dyson;
    throw Error(Errc::validation, "unknown process '" + name + "'");
}

std::string to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::bessel: return "bessel";
        case ProcessKind::bessel_ou: return "bessel_ou";
        case ProcessKind::dyson: return "dyson";
    }
    return "unknown";
}

SimulationBundle simulate(const SimulationRequest& request, const SdeConfig& cfg) {
    cfg.validate();
    require(request.t_final > 0.0, Errc::validation, "t_final must be positive");
    std::vector<double> times;
    for (double t : request.snapshot_times) {
        require(t > 0.0 && t <= request.t_final, Errc::validation, "snapshot times must lie in (0, t_final]");
        times.push_back(t);
    }
    times.push_back(request.t_final);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    EnsembleSpec spec{request.dyson_index, request.n, request.scale2, 1.0};
    std::vector<double> start = request.initial;
    if (request.kind == ProcessKind::dyson) {
        if (spec.scale2 <= 0.0) spec.scale2 = static_cast<double>(request.dyson_index) * request.n;
        require(request.dyson_index == 1 || request.dyson_index == 2 || request.dyson_index == 4,
                Errc::validation, "dyson index must be 1, 2 or 4");
        require(request.n >= 2, Errc::validation, "Dyson gas needs n >= 2");
        if (start.empty()) {
            for (int j = 0; j < request.n; ++j) start.push_back(-1.0 + 2.0 * j / (request.n - 1));
        }
        require(start.size() == static_cast<std::size_t>(request.n) && strictly_increasing(start),
                Errc::validation, "Dyson initial condition must be n strictly increasing values");
    } else {
        require(request.n >= 2, Errc::validation, "radial processes need n >= 2");
        if (start.empty()) start = {1.0};
        require(start.size() == 1 && start[0] > 0.0, Errc::validation, "radial start must be one positive value");
    }

    SimulationBundle bundle;
    for (double t : times) bundle.snapshots.push_back({t, std::vector<std::vector<double>>(request.paths)});
    std::mutex stats_mutex;
    parallel_for(request.paths, [&](std::size_t p) {
        Stream stream(cfg.seed, p);
        StepStats local;
        TrajectoryState state{0.0, start};
        try {
            for (std::size_t k = 0; k < times.size(); ++k) {
                while (state.t < times[k]) {
                    const double remaining = times[k] - state.t;
                    if (remaining < cfg.dt_min) {
                        state.t = times[k];
                        break;
                    }
                    SdeConfig step_cfg = cfg;
                    step_cfg.dt_base = std::min(cfg.dt_base, remaining);
                    switch (request.kind) {
                        case ProcessKind::bessel: state = bessel_step(request.n, state, step_cfg, stream, &local); break;
                        case ProcessKind::bessel_ou:
                            state = bessel_ou_step(request.n, state, step_cfg, stream, &local);
                            break;
                        case ProcessKind::dyson:
                            state = dyson_step(spec, state, step_cfg, stream, &local);
                            if (!strictly_increasing(state.positions)) ++local.ordering_violations;
                            break;
                    }
                }
                bundle.snapshots[k].positions[p] = state.positions;
            }
        } catch (const Error& e) {
            throw Error(e.code(), e.detail() + " (path " + std::to_string(p) + ")");
        }
        std::lock_guard lock(stats_mutex);
        bundle.stats.accepted += local.accepted;
        bundle.stats.rejected += local.rejected;
        bundle.stats.ordering_violations += local.ordering_violations;
    });
    return bundle;
}

}  // namespace sel
