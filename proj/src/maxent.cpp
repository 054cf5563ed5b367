#include "sel/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "sel/error.hpp"
#include "sel/quadrature.hpp"
#include "sel/random.hpp"
#include "sel/rmt.hpp"
#include "sel/special_fns.hpp"

namespace sel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWindowDepth = 40.0;  // exp(-40) ~ 4e-18 of the peak

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

struct Exponent {
    const std::vector<int>& powers;
    const std::vector<double>& lambda;

    double operator()(double x) const {
        double s = 0.0;
        for (std::size_t i = 1; i < powers.size(); ++i) s += lambda[i] * ipow(x, powers[i]);
        return s;
    }
};

// Leading nonzero term must grow towards every unbounded end.
bool integrable(const std::vector<int>& powers, const std::vector<double>& lambda, double lo, double hi) {
    int top = -1;
    double coef = 0.0;
    for (std::size_t i = 1; i < powers.size(); ++i) {
        if (lambda[i] != 0.0 && powers[i] > top) {
            top = powers[i];
            coef = lambda[i];
        }
    }
    if (std::isinf(hi) && !(top > 0 && coef > 0.0)) return false;
    if (std::isinf(lo) && !(top > 0 && (top % 2 == 0 ? coef : -coef) > 0.0)) return false;
    return true;
}

struct Window {
    double a;
    double b;
    double pmin;
};

Window find_window(const Exponent& P, double lo, double hi) {
    double a = std::isinf(lo) ? -1.0 : lo;
    double b = std::isinf(hi) ? 1.0 : hi;
    if (std::isinf(lo) && !std::isinf(hi)) a = std::min(a, hi - 1.0);
    if (std::isinf(hi) && !std::isinf(lo)) b = std::max(b, lo + 1.0);
    auto sampled_min = [&](double l, double r) {
        double m = kInf;
        for (int i = 0; i <= 4000; ++i) m = std::min(m, P(l + (r - l) * i / 4000.0));
        return m;
    };
    for (int iter = 0; iter < 80; ++iter) {
        const double pmin = sampled_min(a, b);
        bool grown = false;
        if (std::isinf(hi) && P(b) - pmin < kWindowDepth) {
            b = b + (b - a);
            grown = true;
        }
        if (std::isinf(lo) && P(a) - pmin < kWindowDepth) {
            a = a - (b - a);
            grown = true;
        }
        if (!grown) break;
        if (iter == 79) throw Error(Errc::divergence, "partition function window does not close");
    }
    const double pmin = sampled_min(a, b);
    // trim to the region within the depth of the minimum, keeping one grid cell of margin
    const int cells = 4000;
    const double h = (b - a) / cells;
    int first = 0;
    int last = cells;
    if (std::isinf(lo)) {
        while (first < cells && P(a + (first + 1) * h) - pmin > kWindowDepth + 5.0) ++first;
    }
    if (std::isinf(hi)) {
        while (last > first && P(a + (last - 1) * h) - pmin > kWindowDepth + 5.0) --last;
    }
    return {a + first * h, a + last * h, pmin};
}

struct DualState {
    double log_z = 0.0;
    std::vector<double> mean;  // <x^j> for j = 0..2 kmax
};

DualState evaluate_dual(const std::vector<int>& powers, const std::vector<double>& lambda, double lo, double hi,
                        int max_moment) {
    Exponent P{powers, lambda};
    const Window w = find_window(P, lo, hi);
    DualState st;
    const double z = quad::integrate([&](double x) { return std::exp(-(P(x) - w.pmin)); }, w.a, w.b);
    require(z > 0.0 && std::isfinite(z), Errc::divergence, "partition function is not finite");
    st.log_z = std::log(z) - w.pmin;
    st.mean.assign(static_cast<std::size_t>(max_moment) + 1, 0.0);
    st.mean[0] = 1.0;
    for (int j = 1; j <= max_moment; ++j) {
        st.mean[j] = quad::integrate([&](double x) { return ipow(x, j) * std::exp(-(P(x) - w.pmin)); }, w.a, w.b) / z;
    }
    return st;
}

// Gaussian elimination with partial pivoting on a small dense system.
std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        if (A[piv * n + c] == 0.0) throw Error(Errc::non_convergence, "singular Hessian in the maxent dual");
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r * n + c] / A[c * n + c];
            for (std::size_t k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
        x[i] = s / A[i * n + i];
    }
    return x;
}

}  // namespace

bool feasibility_halfline(double m1, double m2) {
    require(m1 > 0.0 && m2 > 0.0, Errc::validation, "feasibility needs m1 > 0 and m2 > 0");
    return m1 * m1 <= m2 && m2 <= 2.0 * m1 * m1;
}

std::optional<bool> MomentConstraintSet::feasibility() const {
    if (!half_line()) return std::nullopt;
    std::optional<double> m1;
    std::optional<double> m2;
    for (const auto& [k, m] : moments) {
        if (k == 1) m1 = m;
        if (k == 2) m2 = m;
    }
    if (!m1 || !m2) return std::nullopt;
    return *m1 > 0.0 && *m2 > 0.0 && feasibility_halfline(*m1, *m2);
}

void MomentConstraintSet::validate() const {
    require(lo < hi, Errc::validation, "support must satisfy lo < hi");
    require(!moments.empty(), Errc::validation, "at least one moment constraint is needed");
    require(moments.size() <= 6, Errc::validation, "at most six moment constraints");
    std::vector<int> seen;
    for (const auto& [k, m] : moments) {
        require(k >= 0 && k <= 12, Errc::validation, "moment index must lie in 0..12");
        require(std::isfinite(m), Errc::validation, "moment targets must be finite");
        require(std::find(seen.begin(), seen.end(), k) == seen.end(), Errc::validation, "duplicate moment index");
        if (k == 0) require(std::abs(m - 1.0) < 1e-12, Errc::validation, "m_0 must equal 1");
        seen.push_back(k);
    }
}

nlohmann::json MomentConstraintSet::to_json() const {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& [k, m] : moments) ms.push_back({{"k", k}, {"m", m}});
    auto bound = [](double v) -> nlohmann::json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    return {{"lo", bound(lo)}, {"hi", bound(hi)}, {"moments", ms}};
}

MomentConstraintSet MomentConstraintSet::from_json(const nlohmann::json& j) {
    auto bound = [](const nlohmann::json& v, double fallback) {
        if (v.is_null()) return fallback;
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == "+inf") return kInf;
            if (s == "-inf") return -kInf;
            throw Error(Errc::validation, "bad support bound '" + s + "'");
        }
        return v.get<double>();
    };
    MomentConstraintSet c;
    c.lo = bound(j.value("lo", nlohmann::json()), 0.0);
    c.hi = bound(j.value("hi", nlohmann::json()), kInf);
    for (const auto& m : j.at("moments")) c.moments.emplace_back(m.at("k").get<int>(), m.at("m").get<double>());
    return c;
}

double MaxentSolution::multiplier(int k) const {
    for (std::size_t i = 0; i < powers.size(); ++i)
        if (powers[i] == k) return multipliers[i];
    return 0.0;
}

double MaxentSolution::pdf(double x) const {
    if (x < lo || x > hi) return 0.0;
    double s = multipliers[0] + 1.0;
    for (std::size_t i = 1; i < powers.size(); ++i) s += multipliers[i] * ipow(x, powers[i]);
    return std::exp(-s);
}

nlohmann::json MaxentSolution::to_json() const {
    nlohmann::json lam = nlohmann::json::array();
    for (std::size_t i = 0; i < powers.size(); ++i) {
        lam.push_back({{"k", powers[i]}, {"lambda", multipliers[i]}, {"target", targets[i]}, {"achieved", achieved[i]}});
    }
    return {{"multipliers", lam}, {"entropy", entropy}, {"converged", converged}, {"iterations", iterations}};
}

MaxentSolution solve_maxent(const MomentConstraintSet& constraints, double tol, int max_iter,
                            const std::vector<double>& start) {
    constraints.validate();
    if (auto f = constraints.feasibility(); f && !*f) {
        throw Error(Errc::infeasible, "half-line moments violate m1^2 <= m2 <= 2 m1^2");
    }
    MaxentSolution sol;
    sol.lo = constraints.lo;
    sol.hi = constraints.hi;
    sol.powers.push_back(0);
    sol.targets.push_back(1.0);
    std::map<int, double> target_of;
    for (const auto& [k, m] : constraints.moments) {
        if (k == 0) continue;
        target_of[k] = m;
    }
    for (const auto& [k, m] : target_of) {
        sol.powers.push_back(k);
        sol.targets.push_back(m);
    }
    const std::size_t M = sol.powers.size() - 1;
    require(M >= 1 || (!std::isinf(constraints.lo) && !std::isinf(constraints.hi)), Errc::infeasible,
            "no maximizing density without constraints on an unbounded support");
    const int kmax = sol.powers.back();

    std::vector<double> lambda(M + 1, 0.0);
    auto set = [&](int k, double v) {
        for (std::size_t i = 1; i <= M; ++i)
            if (sol.powers[i] == k) lambda[i] = v;
    };
    if (constraints.half_line() || (!std::isinf(constraints.lo) && std::isinf(constraints.hi))) {
        if (target_of.count(1)) {
            set(1, 1.0 / (target_of[1] - constraints.lo));
        } else if (target_of.count(2)) {
            set(2, 0.5 / target_of[2]);
        } else {
            set(kmax, 1.0);
        }
    } else if (constraints.full_line()) {
        require(kmax % 2 == 0, Errc::infeasible, "full-line maxent needs an even top moment");
        const double m1 = target_of.count(1) ? target_of[1] : 0.0;
        double var = target_of.count(2) ? target_of[2] - m1 * m1 : 1.0;
        require(var > 0.0, Errc::infeasible, "moments imply a nonpositive variance");
        set(2, 0.5 / var);
        set(1, -m1 / var);
        if (!target_of.count(2)) set(kmax, 1.0);
    } else if (std::isinf(constraints.lo)) {
        if (target_of.count(1)) set(1, -1.0 / (constraints.hi - target_of[1]));
        else set(kmax, kmax % 2 == 0 ? 1.0 : -1.0);
    }
    if (!start.empty()) {
        require(start.size() == M, Errc::validation,
                "start needs one multiplier per constrained moment (" + std::to_string(M) + ")");
        std::copy(start.begin(), start.end(), lambda.begin() + 1);
    }

    auto objective = [&](const std::vector<double>& lam, DualState* out) {
        if (!integrable(sol.powers, lam, constraints.lo, constraints.hi)) return kInf;
        DualState st;
        try {
            st = evaluate_dual(sol.powers, lam, constraints.lo, constraints.hi, 2 * kmax);
        } catch (const Error&) {
            return kInf;
        }
        double phi = st.log_z;
        for (std::size_t i = 1; i <= M; ++i) phi += lam[i] * sol.targets[i];
        if (out) *out = std::move(st);
        return phi;
    };

    DualState st;
    double phi = objective(lambda, &st);
    require(std::isfinite(phi), Errc::non_convergence, "initial multipliers are not integrable");
    for (int iter = 0;; ++iter) {
        std::vector<double> g(M);
        double residual = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            g[i] = sol.targets[i + 1] - st.mean[sol.powers[i + 1]];
            residual = std::max(residual, std::abs(g[i]) / std::max(1.0, std::abs(sol.targets[i + 1])));
        }
        std::vector<double> shown = lambda;
        shown[0] = st.log_z - 1.0;
        sol.trace.push_back({iter, shown, residual, phi});
        if (residual < tol) {
            sol.converged = true;
            sol.iterations = iter;
            break;
        }
        if (iter >= max_iter) {
            throw Error(Errc::non_convergence, "maxent Newton did not converge in " + std::to_string(max_iter) +
                                                   " iterations (residual " + std::to_string(residual) + ")");
        }
        std::vector<double> H(M * M);
        for (std::size_t i = 0; i < M; ++i) {
            for (std::size_t j = 0; j < M; ++j) {
                const int ki = sol.powers[i + 1];
                const int kj = sol.powers[j + 1];
                H[i * M + j] = st.mean[ki + kj] - st.mean[ki] * st.mean[kj];
            }
        }
        std::vector<double> neg_g(M);
        for (std::size_t i = 0; i < M; ++i) neg_g[i] = -g[i];
        // Newton direction for phi: H d = -grad, grad = g
        const auto d = solve_linear(H, neg_g);
        double slope = 0.0;
        for (std::size_t i = 0; i < M; ++i) slope += g[i] * d[i];
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            std::vector<double> trial = lambda;
            for (std::size_t i = 0; i < M; ++i) trial[i + 1] += t * d[i];
            DualState trial_state;
            const double trial_phi = objective(trial, &trial_state);
            if (std::isfinite(trial_phi) && trial_phi <= phi + 1e-4 * t * slope + 1e-14 * std::abs(phi)) {
                lambda = std::move(trial);
                phi = trial_phi;
                st = std::move(trial_state);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw Error(Errc::non_convergence, "maxent line search stalled at residual " + std::to_string(residual));
        }
    }
    sol.multipliers = lambda;
    sol.multipliers[0] = st.log_z - 1.0;
    sol.achieved.resize(M + 1);
    for (std::size_t i = 0; i <= M; ++i) sol.achieved[i] = st.mean[sol.powers[i]];
    sol.entropy = phi;
    return sol;
}

AuxFunction AuxFunction::tabulated(std::vector<double> xs, std::vector<double> values) {
    require(xs.size() >= 2 && xs.size() == values.size(), Errc::validation, "tabulated T needs matching nodes");
    for (std::size_t i = 1; i < xs.size(); ++i)
        require(xs[i] > xs[i - 1], Errc::validation, "tabulated T nodes must increase");
    for (double v : values) require(std::isfinite(v), Errc::validation, "tabulated T values must be finite");
    return {false, std::move(xs), std::move(values)};
}

double AuxFunction::operator()(double x) const {
    if (neg_log) return -std::log(x);
    if (x <= xs.front()) return values.front();
    if (x >= xs.back()) return values.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - w) * values[i - 1] + w * values[i];
}

namespace {

struct KLMoments {
    double z;
    double mean;
    double var;
};

double lambda_floor(const DensityModel& ref, const AuxFunction& T) {
    return T.neg_log ? -(ref.shape().power + 1.0) : -kInf;
}

KLMoments kl_moments(const DensityModel& ref, const AuxFunction& T, double lambda) {
    auto weight = [&](double x) {
        if (!(x > 0.0)) return 0.0;
        return std::exp(ref.log_pdf(x) - lambda * T(x));
    };
    const double z = quad::integrate_halfline(weight);
    require(z > 0.0 && std::isfinite(z), Errc::divergence, "1/C is not finite at this multiplier");
    const double m1 = quad::integrate_halfline([&](double x) { return x > 0.0 ? T(x) * weight(x) : 0.0; }) / z;
    const double m2 =
        quad::integrate_halfline([&](double x) { return x > 0.0 ? (T(x) - m1) * (T(x) - m1) * weight(x) : 0.0; }) / z;
    return {z, m1, m2};
}

}  // namespace

double kl_expected_aux(const DensityModel& ref, const AuxFunction& T, double lambda) {
    require(lambda > lambda_floor(ref, T), Errc::domain, "multiplier below the integrability bound");
    return kl_moments(ref, T, lambda).mean;
}

double KLSolution::pdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    return C * std::exp(ref.log_pdf(x) - lambda * T(x));
}

GridDensity KLSolution::tabulate(const UniformGrid& grid) const {
    return GridDensity::tabulate(grid, [this](double x) { return pdf(x); });
}

KLSolution kl_family_at(const DensityModel& ref, const AuxFunction& T, double lambda) {
    require(lambda > lambda_floor(ref, T), Errc::domain, "multiplier below the integrability bound");
    const auto m = kl_moments(ref, T, lambda);
    return {lambda, 1.0 / m.z, m.mean, ref, T};
}

KLSolution solve_kl_min(const KLConstraint& constraint, double tol) {
    const auto& ref = constraint.ref;
    const auto& T = constraint.T;
    const double theta = constraint.theta;
    require(std::isfinite(theta), Errc::validation, "theta must be finite");
    kl_moments(ref, T, 0.0);  // int T rho_ref must be finite
    const double floor = lambda_floor(ref, T);
    auto g = [&](double lam) { return kl_moments(ref, T, lam).mean - theta; };
    auto g_or_no_root = [&](double lam, const char* msg) {
        try {
            return g(lam);
        } catch (const Error& e) {
            if (e.code() == Errc::divergence) throw Error(Errc::no_root, msg);
            throw;
        }
    };

    // g decreases in lambda: find lo with g(lo) >= 0 and hi with g(hi) <= 0
    double lo = std::max(-1.0, std::isinf(floor) ? -1.0 : 0.5 * floor);
    double hi = 1.0;
    double g_lo = g(lo);
    double g_hi = g(hi);
    for (int i = 0; g_hi > 0.0; ++i) {
        if (i == 60) throw Error(Errc::no_root, "theta lies below the attainable range of <T>");
        lo = hi;
        g_lo = g_hi;
        hi = 2.0 * hi + 1.0;
        g_hi = g_or_no_root(hi, "theta lies below the attainable range of <T>");
    }
    for (int i = 0; g_lo < 0.0; ++i) {
        if (i == 60) throw Error(Errc::no_root, "theta lies above the attainable range of <T>");
        hi = lo;
        g_hi = g_lo;
        lo = std::isinf(floor) ? 2.0 * lo - 1.0 : floor + 0.5 * (lo - floor);
        g_lo = g_or_no_root(lo, "theta lies above the attainable range of <T>");
    }
    double lam = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const auto m = kl_moments(ref, T, lam);
        const double val = m.mean - theta;
        if (std::abs(val) <= tol * std::max(1.0, std::abs(theta))) break;
        if (val > 0.0) lo = lam;
        else hi = lam;
        double next = m.var > 0.0 ? lam + val / m.var : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(lam))) break;
        lam = next;
    }
    return kl_family_at(ref, T, lam);
}

double log_moment_exponential(double alpha) {
    require(alpha > 0.0, Errc::domain, "log moment needs alpha > 0");
    return -(special::euler_gamma + std::log(alpha)) / alpha;
}

double log_moment_gaussian(double alpha) {
    require(alpha > 0.0, Errc::domain, "log moment needs alpha > 0");
    return -std::sqrt(special::pi / (16.0 * alpha)) * (special::euler_gamma + std::log(4.0 * alpha));
}

nlohmann::json BalianReport::to_json() const {
    return {{"dyson_index", dyson_index}, {"n", n},
            {"scale2", scale2},           {"components", components},
            {"trace_target", trace_target}, {"info_star", info_star},
            {"perturbations", info_perturbed.size()}, {"all_greater", all_greater},
            {"min_gap", min_gap}};
}

namespace {

struct Mixture {
    double w;
    double mu1, s1, mu2, s2;

    double second_moment() const { return w * (mu1 * mu1 + s1 * s1) + (1.0 - w) * (mu2 * mu2 + s2 * s2); }

    // int p ln p
    double information() const {
        const double lo = std::min(mu1 - 40.0 * s1, mu2 - 40.0 * s2);
        const double hi = std::max(mu1 + 40.0 * s1, mu2 + 40.0 * s2);
        auto logn = [](double x, double m, double s) {
            const double z = (x - m) / s;
            return -0.5 * z * z - std::log(s) - 0.5 * std::log(2.0 * special::pi);
        };
        auto f = [&](double x) {
            const double a = std::log(w) + logn(x, mu1, s1);
            const double b = std::log1p(-w) + logn(x, mu2, s2);
            const double top = std::max(a, b);
            const double lp = top + std::log1p(std::exp(-std::abs(a - b)));
            const double p = std::exp(lp);
            return p > 0.0 ? p * lp : 0.0;
        };
        return quad::integrate(f, lo, hi, 1e-11);
    }
};

}  // namespace

BalianReport balian_min_check(int dyson_index, int n, double scale2, std::size_t perturbations, std::uint64_t seed) {
    const EnsembleSpec spec{dyson_index, n, scale2, 1.0};
    spec.validate();
    require(n <= 4, Errc::validation, "Balian check is limited to n <= 4");
    BalianReport rep;
    rep.dyson_index = dyson_index;
    rep.n = n;
    rep.scale2 = scale2;
    rep.components = spec.independent_elements();
    const auto nd = static_cast<std::size_t>(n);
    std::vector<double> var(rep.components);
    std::vector<double> weight(rep.components);
    for (std::size_t c = 0; c < rep.components; ++c) {
        const bool diag = c < nd;
        var[c] = element_variance(spec, diag);
        weight[c] = diag ? 1.0 : 2.0;
        rep.trace_target += weight[c] * var[c];
        rep.info_star += -0.5 * std::log(2.0 * special::pi * std::exp(1.0) * var[c]);
    }
    rep.info_perturbed.assign(perturbations, 0.0);
    parallel_for(perturbations, [&](std::size_t trial) {
        Stream s(seed, trial);
        double info = 0.0;
        double trace = 0.0;
        for (std::size_t c = 0; c < rep.components; ++c) {
            const double sd = std::sqrt(var[c]);
            Mixture m{0.1 + 0.8 * s.uniform(), sd * s.normal(), sd * (0.3 + 1.2 * s.uniform()), sd * s.normal(),
                      sd * (0.3 + 1.2 * s.uniform())};
            info += m.information();
            trace += weight[c] * m.second_moment();
        }
        if (!(trace > 0.0) || !std::isfinite(trace)) {
            throw Error(Errc::constraint_repair, "perturbation cannot be rescaled to the trace constraint");
        }
        // x -> k x with k^2 = target / trace shifts each component's information by -ln k
        const double k = std::sqrt(rep.trace_target / trace);
        rep.info_perturbed[trial] = info - static_cast<double>(rep.components) * std::log(k);
    });
    rep.min_gap = kInf;
    for (double v : rep.info_perturbed) {
        rep.min_gap = std::min(rep.min_gap, v - rep.info_star);
        if (!(v > rep.info_star)) rep.all_greater = false;
    }
    if (perturbations == 0) rep.min_gap = 0.0;
    return rep;
}

}  // namespace sel
