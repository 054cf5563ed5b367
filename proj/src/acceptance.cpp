#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "sel/calogero.hpp"
#include "sel/densities.hpp"
#include "sel/entropy.hpp"
#include "sel/error.hpp"
#include "sel/experiments.hpp"
#include "sel/fokker_planck.hpp"
#include "sel/histogram.hpp"
#include "sel/maxent.hpp"
#include "sel/processes.hpp"
#include "sel/quadrature.hpp"
#include "sel/rmt.hpp"
#include "sel/special_fns.hpp"

namespace sel {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Verdict {
    bool passed = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!ok) detail += (detail.empty() ? "" : "; ") + ("FAILED " + what);
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

CriterionResult run(int id, const std::string& name, const std::function<void(Verdict&)>& body) {
    CriterionResult c;
    c.id = id;
    c.name = name;
    const auto t0 = Clock::now();
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.passed = false;
        v.note(std::string("error: ") + e.what());
    }
    c.seconds = since(t0);
    c.passed = v.passed;
    c.detail = v.detail;
    return c;
}

SurmiseLabel surmise_for(int beta) {
    return beta == 1 ? SurmiseLabel::GOE : beta == 2 ? SurmiseLabel::GUE : SurmiseLabel::GSE;
}

constexpr std::uint64_t kComponentStreams = 1ull << 32;

void surmise_exactness(Verdict& v, std::uint64_t seed) {
    for (int beta : {1, 2, 4}) {
        const auto t0 = Clock::now();
        const auto s = spacing_from_matrix(beta, 100000, seed);
        const double l1 = l1_distance(make_histogram(s, 50, 0.0, 4.0), DensityModel::surmise(surmise_for(beta)));
        const double secs = since(t0);
        const std::string label = to_string(surmise_for(beta));
        v.note(label + " L1=" + num(l1));
        v.check(l1 < 0.02, label + " L1 < 0.02");
        v.check(secs < 30.0, label + " runtime < 30 s");
    }
}

void component_equivalence(Verdict& v, std::uint64_t seed) {
    for (auto [k, beta] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{5, 4}}) {
        const auto a = spacing_from_components(k, 100000, seed, kComponentStreams);
        const auto b = spacing_from_matrix(beta, 100000, seed);
        const double ks = ks_two_sample(a, b);
        v.note("k=" + std::to_string(k) + " KS=" + num(ks));
        v.check(ks < 0.01, "k=" + std::to_string(k) + " KS < 0.01");
    }
}

void entropy_closed_forms(Verdict& v) {
    double worst_erlang = 0.0;
    for (int a = 1; a <= 5; ++a) {
        for (int n = 1; n <= 5; ++n) {
            const auto m = DensityModel::erlang(a, n);
            worst_erlang = std::max(worst_erlang, std::abs(shannon_entropy_closed(m) - differential_entropy(m)));
        }
    }
    double worst_bou = 0.0;
    double worst_offset = 0.0;
    for (int n = 1; n <= 6; ++n) {
        const auto m = DensityModel::bessel_ou(n);
        const double q = differential_entropy(m);
        worst_bou = std::max(worst_bou, std::abs(shannon_entropy_closed(m) - q));
        worst_offset =
            std::max(worst_offset, std::abs((q - bessel_ou_entropy_uncorrected(n)) - (0.5 - std::log(2.0))));
    }
    v.note("erlang " + num(worst_erlang) + ", bessel-ou " + num(worst_bou) + ", offset " + num(worst_offset));
    v.check(worst_erlang <= 1e-8, "erlang entropies");
    v.check(worst_bou <= 1e-8, "bessel-ou entropies");
    v.check(worst_offset <= 1e-8, "uncorrected bessel-ou offset 1/2 - ln 2");
}

void reference_numerics(Verdict& v) {
    const auto p0 = DensityModel::surmise(SurmiseLabel::P0);
    const double var = quad::integrate_halfline([&](double s) { return (s - 1.0) * (s - 1.0) * p0.pdf(s); });
    const double var_err = std::abs(var - (special::pi - 2.0) / 2.0);
    const double s_err = std::abs(differential_entropy(p0) - 0.5 * (std::log(special::pi * special::pi / 4.0) + 1.0));
    double log_err = 0.0;
    for (double a : {0.25, 0.5, 1.0, 2.0, 3.0, 7.5}) {
        const double e = quad::integrate_halfline([&](double x) { return x > 0.0 ? std::exp(-a * x) * std::log(x) : 0.0; });
        const double g =
            quad::integrate_halfline([&](double x) { return x > 0.0 ? std::exp(-a * x * x) * std::log(x) : 0.0; });
        log_err = std::max({log_err, std::abs(e - log_moment_exponential(a)), std::abs(g - log_moment_gaussian(a))});
    }
    v.note("variance " + num(var_err) + ", entropy " + num(s_err) + ", log integrals " + num(log_err));
    v.check(var_err <= 1e-10, "P0 variance");
    v.check(s_err <= 1e-8, "P0 entropy");
    v.check(log_err <= 1e-9, "log integrals");
}

void maxent_recovery(Verdict& v) {
    const double m1 = 0.5;
    MomentConstraintSet expo{0.0, std::numeric_limits<double>::infinity(), {{1, m1}}};
    const auto se = solve_maxent(expo, 1e-12, 200, {0.2});
    const double mult_err = std::abs(se.multiplier(1) - 1.0 / m1);
    v.note("exponential multiplier " + num(mult_err) + " after " + std::to_string(se.iterations) + " steps");
    v.check(mult_err < 1e-8, "exponential multiplier");

    const double mu = 0.3;
    const double sigma2 = 2.0;
    const double inf = std::numeric_limits<double>::infinity();
    MomentConstraintSet gauss{-inf, inf, {{1, mu}, {2, mu * mu + sigma2}}};
    const auto sg = solve_maxent(gauss, 1e-12, 200, {0.0, 1.0});
    const double s_err = std::abs(sg.entropy - 0.5 * std::log(2.0 * special::pi * std::exp(1.0) * sigma2));
    v.note("gaussian entropy " + num(s_err) + " after " + std::to_string(sg.iterations) + " steps");
    v.check(s_err <= 1e-8, "gaussian entropy");

    MomentConstraintSet edge{0.0, inf, {{1, m1}, {2, 2.0 * m1 * m1}}};
    const auto sb = solve_maxent(edge);
    v.check(sb.converged && std::abs(sb.multiplier(2)) < 1e-6, "boundary m2 = 2 m1^2 converges to the exponential");
    bool rejected = false;
    try {
        MomentConstraintSet beyond{0.0, inf, {{1, m1}, {2, 2.01 * m1 * m1}}};
        const auto sx = solve_maxent(beyond);
        rejected = !sx.converged;
    } catch (const Error& e) {
        rejected = e.code() == Errc::infeasible || e.code() == Errc::non_convergence;
    }
    v.check(rejected, "m2 = 2.01 m1^2 is reported infeasible");
    v.note(std::string("boundary converged, beyond ") + (rejected ? "rejected" : "accepted"));
}

void kl_family_recovery(Verdict& v) {
    const double rate = 2.0;
    const auto expo = DensityModel::erlang(rate, 1);
    const auto half = DensityModel::half_line_gaussian(0.5);
    double worst = 0.0;
    double worst_lambda = 0.0;
    for (int lam = 1; lam <= 4; ++lam) {
        const double theta_e = -(special::digamma(lam + 1.0) - std::log(rate));
        const double theta_h = -0.5 * special::digamma((lam + 1.0) / 2.0);
        const auto ke = solve_kl_min({expo, AuxFunction::negative_log(), theta_e});
        const auto kh = solve_kl_min({half, AuxFunction::negative_log(), theta_h});
        const auto te = DensityModel::erlang(rate, lam + 1);
        const auto th = DensityModel::bessel_ou(lam + 1);
        for (int i = 1; i <= 4000; ++i) {
            const double x = 0.005 * i;
            worst = std::max({worst, std::abs(ke.pdf(x) - te.pdf(x)), std::abs(kh.pdf(x) - th.pdf(x))});
        }
        worst_lambda = std::max({worst_lambda, std::abs(ke.lambda - lam), std::abs(kh.lambda - lam)});
    }
    v.note("sup error " + num(worst) + ", multiplier error " + num(worst_lambda));
    v.check(worst <= 1e-8, "L-infinity shape error");
}

void bessel_ou_kernel(Verdict& v) {
    const auto t0 = Clock::now();
    double norm_err = 0.0;
    double ck_err = 0.0;
    double sup = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (double r0 : {0.3, 1.0, 2.0}) {
            const double norm = quad::integrate_halfline([&](double r) { return bessel_ou_transition_pdf(n, r0, r, 0.5); });
            norm_err = std::max(norm_err, std::abs(norm - 1.0));
            const double ck = quad::integrate_halfline(
                [&](double r) { return bessel_ou_transition_pdf(n, r0, r, 0.3) * bessel_ou_transition_pdf(n, r, 1.3, 0.7); });
            ck_err = std::max(ck_err, std::abs(ck - bessel_ou_transition_pdf(n, r0, 1.3, 1.0)));
        }
        const auto inv = DensityModel::bessel_ou(n);
        for (int i = 1; i <= 800; ++i) {
            const double r = 0.005 * i;
            sup = std::max(sup, std::abs(bessel_ou_transition_pdf(n, 1.0, r, 20.0) - inv.pdf(r)));
        }
    }
    const double secs = since(t0);
    v.note("normalization " + num(norm_err) + ", composition " + num(ck_err) + ", sup " + num(sup));
    v.check(norm_err <= 1e-8, "normalization");
    v.check(ck_err <= 1e-6, "Chapman-Kolmogorov");
    v.check(sup <= 1e-6, "t = 20 convergence");
    v.check(secs < 60.0, "runtime < 60 s");
}

void dyson_equilibrium(Verdict& v, std::uint64_t seed) {
    SimulationRequest rq;
    rq.kind = ProcessKind::dyson;
    rq.n = 2;
    rq.dyson_index = 1;
    rq.t_final = 50.0;
    rq.paths = 10000;
    SdeConfig cfg;
    cfg.dt_base = 1e-2;
    cfg.seed = seed;
    const auto b = simulate(rq, cfg);
    std::vector<double> gaps;
    for (const auto& p : b.snapshots.back().positions) gaps.push_back(p[1] - p[0]);
    rescale_unit_mean(gaps);
    const double l1 = l1_distance(make_histogram(gaps, 10, 0.0, 4.0), DensityModel::surmise(SurmiseLabel::GOE));
    v.note("L1=" + num(l1) + " (10 bins), violations " + std::to_string(b.stats.ordering_violations) + ", rejected " +
           std::to_string(b.stats.rejected));
    v.check(l1 < 0.03, "L1 < 0.03");
    v.check(b.stats.ordering_violations == 0, "no ordering violations");
}

void fp_case(Verdict& v, const std::string& label, const ThermoSpec& spec, double mean, double sd, double t_final) {
    const auto rho0 =
        GridDensity::tabulate(spec.grid, [&](double x) { return std::exp(-0.5 * (x - mean) * (x - mean) / (sd * sd)); })
            .normalized();
    const double dt = 0.5 * stability_bound(spec);
    std::vector<double> times;
    const int reports = static_cast<int>(std::lround(t_final / 0.01));
    for (int k = 0; k <= reports; ++k) times.push_back(0.01 * k);
    bool monotone = true;
    std::vector<ThermoReport> reps;
    try {
        reps = relaxation_run(rho0, spec, dt, times);
    } catch (const Error& e) {
        if (e.code() != Errc::monotonicity) throw;
        monotone = false;
        v.note(label + ": " + e.detail());
    }
    v.check(monotone, label + " monotonicity");
    if (!monotone) return;
    double identity = 0.0;
    for (const auto& r : reps) identity = std::max(identity, std::abs((r.F - r.F_star) + spec.temperature * r.H_c));
    const double balance = entropy_balance_error(reps, spec);
    const auto g = gibbs_density(spec);
    GridDensity r = g.density;
    for (int k = 0; k < 1000; ++k) r = fp_step(r, spec, dt);
    double drift = 0.0;
    for (std::size_t k = 0; k < r.values.size(); ++k) drift = std::max(drift, std::abs(r.values[k] - g.density.values[k]));
    v.note(label + ": identity " + num(identity) + ", balance " + num(balance) + ", gibbs " + num(drift));
    v.check(identity <= 1e-8, label + " F - F* = -T H_c");
    v.check(balance <= 0.02, label + " entropy balance");
    v.check(drift <= 1e-10, label + " Gibbs stationarity");
}

void fp_thermodynamics(Verdict& v) {
    Potential harmonic;
    harmonic.kind = PotentialKind::harmonic;
    fp_case(v, "harmonic", ThermoSpec::make(UniformGrid::span(-12.0, 12.0, 1201), harmonic, 1.0, 1.0), 2.0, 0.5, 10.0);
    Potential bistable;
    bistable.kind = PotentialKind::bistable;
    fp_case(v, "bistable", ThermoSpec::make(UniformGrid::span(-4.0, 4.0, 801), bistable, 0.5, 1.0), -1.2, 0.3, 5.0);
}

void quantum_checks(Verdict& v) {
    const auto hg = UniformGrid::span(-10.0, 10.0, 2001);
    const auto h0 = ground_state_entropies(hermite_state(0, hg));
    const double slack = std::abs(h0.entropic_slack());
    const double prod = std::abs(h0.product() - 0.5);
    v.note("harmonic slack " + num(slack) + ", product " + num(prod));
    v.check(slack <= 1e-4, "harmonic entropic saturation");
    v.check(prod <= 1e-6, "harmonic dX dP = 1/2");

    const auto grid = half_line_grid(10.0, 5000);
    double worst_rq = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    bool chains = true;
    bool nodes = true;
    std::vector<CalogeroSpec> specs;
    for (double g : {0.0, 1.0, 2.0, 3.0}) specs.push_back({CalogeroForm::singular, g});
    for (double b : {1.0, 2.0, 3.0, 4.0}) specs.push_back({CalogeroForm::two_level, b});
    for (const auto& spec : specs) {
        for (int n = 0; n <= 3; ++n) {
            const auto psi = eigenfunction(spec, n, grid);
            const auto u = ground_state_entropies(psi);
            worst_rq = std::max(worst_rq, std::abs(rayleigh_quotient(spec, psi) - spectrum(spec, n)));
            min_slack = std::min(min_slack, u.entropic_slack());
            chains = chains && u.heisenberg_chain() && u.variance_chain();
            nodes = nodes && sign_changes(psi) == n;
        }
    }
    bool exact = true;
    for (int b = 1; b <= 4; ++b) exact = exact && spectrum({CalogeroForm::two_level, double(b)}, 0) == (b + 1) / 2.0;
    v.note("rayleigh " + num(worst_rq) + ", min slack " + num(min_slack));
    v.check(min_slack >= 0.0, "entropic uncertainty for every state");
    v.check(chains, "inequality chains");
    v.check(nodes, "node counts");
    v.check(worst_rq <= 1e-4, "Rayleigh quotients");
    v.check(exact, "E0 = (beta + 1)/2");
}

void coarse_graining(Verdict& v) {
    double worst = 0.0;
    for (const auto& m : surmise_catalog()) {
        const double S = differential_entropy(m);
        const double L = m.upper_cutoff(1e-16);
        double prev = -1.0;
        for (std::size_t N = 64; N <= 4096; N *= 2) {
            const auto g = coarse_grain(m, L, N);
            const double err = std::abs(discrete_entropy(g) + std::log(g.cell_width()) - S);
            if (prev > 0.0) {
                worst = std::max(worst, err / prev);
                v.check(err / prev <= 0.75, m.label() + " at N = " + std::to_string(N));
            }
            prev = err;
        }
    }
    v.note("max ratio " + num(worst));
}

}  // namespace

std::vector<CriterionResult> run_acceptance_criteria(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(run(1, "surmise exactness", [&](Verdict& v) { surmise_exactness(v, seed); }));
    out.push_back(run(2, "component/matrix equivalence", [&](Verdict& v) { component_equivalence(v, seed); }));
    out.push_back(run(3, "entropy closed forms", entropy_closed_forms));
    out.push_back(run(4, "reference numerics", reference_numerics));
    out.push_back(run(5, "maxent recovery", maxent_recovery));
    out.push_back(run(6, "KL family recovery", kl_family_recovery));
    out.push_back(run(7, "Bessel-OU kernel", bessel_ou_kernel));
    out.push_back(run(8, "Dyson equilibrium", [&](Verdict& v) { dyson_equilibrium(v, seed); }));
    out.push_back(run(9, "Fokker-Planck thermodynamics", fp_thermodynamics));
    out.push_back(run(10, "quantum checks", quantum_checks));
    out.push_back(run(11, "coarse-graining limit", coarse_graining));
    return out;
}

}  // namespace sel
