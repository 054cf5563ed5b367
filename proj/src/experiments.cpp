#include "sel/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "sel/calogero.hpp"
#include "sel/densities.hpp"
#include "sel/entropy.hpp"
#include "sel/error.hpp"
#include "sel/fokker_planck.hpp"
#include "sel/histogram.hpp"
#include "sel/maxent.hpp"
#include "sel/processes.hpp"
#include "sel/quadrature.hpp"
#include "sel/rmt.hpp"
#include "sel/special_fns.hpp"

namespace sel {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Reads typed parameters with defaults; finish() rejects keys nobody asked for.
class ParamReader {
public:
    explicit ParamReader(const json& j) : j_(j) {
        require(j.is_object(), Errc::validation, "parameters must be a JSON object");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw Error(Errc::validation, "parameter '" + key + "' has the wrong type");
        }
    }

    double number(const std::string& key, double fallback) {
        if (has(key) && j_.at(key).is_string()) {
            const auto s = j_.at(key).get<std::string>();
            if (s == "inf" || s == "+inf") return kInf;
            if (s == "-inf") return -kInf;
        }
        return get<double>(key, fallback);
    }

    double positive(const std::string& key, double fallback) {
        const double v = number(key, fallback);
        require(v > 0.0 && std::isfinite(v), Errc::validation, "parameter '" + key + "' must be positive");
        return v;
    }

    std::size_t count(const std::string& key, std::size_t fallback, std::size_t lo, std::size_t hi) {
        const long long v = get<long long>(key, static_cast<long long>(fallback));
        require(v >= static_cast<long long>(lo) && v <= static_cast<long long>(hi), Errc::validation,
                "parameter '" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<std::size_t>(v);
    }

    int integer(const std::string& key, int fallback, int lo, int hi) {
        return static_cast<int>(count(key, static_cast<std::size_t>(fallback), static_cast<std::size_t>(lo),
                                      static_cast<std::size_t>(hi)));
    }

    std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> options) {
        const auto v = get<std::string>(key, fallback);
        for (const char* o : options)
            if (v == o) return v;
        std::string list;
        for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
        throw Error(Errc::validation, "parameter '" + key + "' must be one of " + list);
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) throw Error(Errc::validation, "unknown parameter '" + item.key() + "'");
        }
    }

private:
    const json& j_;
    std::set<std::string> used_;
};

DensityModel parse_density(const json& v) {
    if (v.is_string()) return DensityModel::surmise(surmise_from_string(v.get<std::string>()));
    return DensityModel::from_json(v);
}

struct Output {
    ExperimentResult result;
    json results = json::object();

    void add(const std::string& name, std::string content) {
        result.artifacts.push_back({name, std::move(content)});
    }
    void table(const std::string& stem, const io::Table& t) {
        add(stem + "." + io::extension(result.format), t.render(result.format));
    }
    void histogram(const std::string& stem, const HistogramTable& h) {
        add(stem + "." + io::extension(result.format),
            result.format == io::Format::csv ? histogram_csv(h) : dump(h.to_json()));
    }
};

json histogram_summary_json(const HistogramSummary& s) {
    json j{{"mean", s.mean}, {"stddev", s.stddev}};
    if (s.has_model) {
        j["L1"] = s.l1;
        j["KS"] = s.ks;
    }
    return j;
}

// ---------------------------------------------------------------- catalog

void run_catalog(ParamReader& p, Output& out) {
    p.finish();
    io::Table t({"label", "kind", "coef", "power", "rate", "stretch", "norm_quadrature", "mean_quadrature",
                 "variance", "S_quadrature"});
    json models = json::array();
    double worst_norm = 0.0;
    double worst_mean = 0.0;
    for (const auto& m : surmise_catalog()) {
        const auto& sh = m.shape();
        const double norm = quad::integrate_halfline([&](double s) { return m.pdf(s); });
        const double mean = quad::integrate_halfline([&](double s) { return s * m.pdf(s); });
        worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
        worst_mean = std::max(worst_mean, std::abs(mean - 1.0));
        t.row({m.label(), m.kind_name(), sh.coef, static_cast<long long>(sh.power), sh.rate,
               static_cast<long long>(sh.stretch), norm, mean, m.variance(), differential_entropy(m)});
        json entry = m.to_json();
        entry["label"] = m.label();
        models.push_back(entry);
    }
    out.table("catalog", t);
    out.add("catalog_models.json", dump(models));
    out.results = {{"entries", models.size()}, {"max_norm_error", worst_norm}, {"max_mean_error", worst_mean}};
}

// ---------------------------------------------------------- entropy-table

void run_entropy_table(ParamReader& p, Output& out) {
    const auto family = p.choice("family", "all", {"all", "catalog", "erlang", "bessel_ou", "half_line_gaussian"});
    p.finish();
    std::vector<DensityModel> models;
    const bool all = family == "all";
    if (all || family == "catalog") {
        for (const auto& m : surmise_catalog()) models.push_back(m);
    }
    if (all || family == "erlang") {
        for (int a = 1; a <= 5; ++a)
            for (int n = 1; n <= 5; ++n) models.push_back(DensityModel::erlang(a, n));
    }
    if (all || family == "bessel_ou") {
        for (int n = 1; n <= 6; ++n) models.push_back(DensityModel::bessel_ou(n));
    }
    if (all || family == "half_line_gaussian") {
        models.push_back(DensityModel::half_line_gaussian(1.0));
        models.push_back(DensityModel::half_line_gaussian(special::pi / 2.0));
    }
    io::Table t({"label", "S_closed", "S_quadrature", "abs_diff"});
    double worst = 0.0;
    std::size_t closed = 0;
    json printed = json::array();
    for (const auto& m : models) {
        const double quad = differential_entropy(m);
        try {
            const double c = shannon_entropy_closed(m);
            worst = std::max(worst, std::abs(c - quad));
            ++closed;
            t.row({m.label(), c, quad, std::abs(c - quad)});
        } catch (const Error& e) {
            if (e.code() != Errc::unsupported) throw;
            t.row({m.label(), std::monostate{}, quad, std::monostate{}});
        }
        if (const auto* b = std::get_if<BesselOUParams>(&m.params())) {
            printed.push_back({{"n", b->dim},
                               {"uncorrected", bessel_ou_entropy_uncorrected(b->dim)},
                               {"quadrature_minus_uncorrected", quad - bessel_ou_entropy_uncorrected(b->dim)}});
        }
    }
    out.table("entropy_table", t);
    out.results = {{"family", family},
                   {"rows", models.size()},
                   {"closed_forms", closed},
                   {"max_abs_diff", worst}};
    if (!printed.empty()) {
        out.results["bessel_ou_uncorrected"] = printed;
        out.results["expected_offset"] = 0.5 - std::log(2.0);
    }
}

// ----------------------------------------------------------- coarse-grain

void run_coarse_grain(ParamReader& p, Output& out) {
    const DensityModel model = p.has("density") ? parse_density(p.raw("density")) : DensityModel::surmise(SurmiseLabel::GOE);
    const std::size_t n0 = p.count("cells", 64, 1, 1u << 20);
    const int doublings = p.integer("doublings", 6, 0, 16);
    const double L = p.has("L") ? p.positive("L", 1.0) : model.upper_cutoff(1e-16);
    p.finish();
    const double S = differential_entropy(model);
    io::Table t({"N", "delta", "S_mu", "S_mu_plus_ln_delta", "S_rho", "abs_err", "ratio"});
    double prev = -1.0;
    double worst_ratio = 0.0;
    bool monotone = true;
    bool bounded = true;
    for (int d = 0; d <= doublings; ++d) {
        const std::size_t N = n0 << d;
        const CoarseGrid g = coarse_grain(model, L, N);
        const double s_mu = discrete_entropy(g);
        const double shifted = s_mu + std::log(g.cell_width());
        const double err = std::abs(shifted - S);
        bounded = bounded && s_mu >= 0.0 && s_mu <= std::log(static_cast<double>(N)) + 1e-12;
        io::Cell ratio = std::monostate{};
        if (prev > 0.0) {
            ratio = err / prev;
            worst_ratio = std::max(worst_ratio, err / prev);
            monotone = monotone && err < prev;
        }
        t.row({static_cast<long long>(N), g.cell_width(), s_mu, shifted, S, err, ratio});
        prev = err;
    }
    out.table("coarse_grain", t);
    out.results = {{"density", model.to_json()}, {"L", L},          {"S_rho", S},
                   {"monotone", monotone},       {"max_ratio", worst_ratio}, {"bounds_hold", bounded}};
}

// ----------------------------------------------------------------- maxent

void run_maxent(ParamReader& p, Output& out, std::uint64_t seed) {
    const auto mode = p.choice("mode", "moments", {"moments", "balian"});
    if (mode == "balian") {
        const int beta = p.integer("dyson_index", 1, 1, 4);
        const int n = p.integer("n", 2, 2, 4);
        const double a2 = p.positive("scale2", 1.0);
        const std::size_t trials = p.count("perturbations", 50, 1, 100000);
        p.finish();
        const BalianReport rep = balian_min_check(beta, n, a2, trials, seed);
        out.add("balian.json", dump(rep.to_json()));
        io::Table t({"trial", "information", "gap"});
        for (std::size_t i = 0; i < rep.info_perturbed.size(); ++i) {
            t.row({static_cast<long long>(i), rep.info_perturbed[i], rep.info_perturbed[i] - rep.info_star});
        }
        out.table("balian_trials", t);
        out.results = rep.to_json();
        return;
    }
    MomentConstraintSet cs;
    if (p.has("constraints")) {
        try {
            cs = MomentConstraintSet::from_json(p.raw("constraints"));
        } catch (const json::exception& e) {
            throw Error(Errc::validation, std::string("malformed constraints: ") + e.what());
        }
    } else {
        cs.moments = {{1, 1.0}};
    }
    const double tol = p.positive("tol", 1e-10);
    const int max_iter = p.integer("max_iter", 200, 1, 100000);
    p.finish();
    const MaxentSolution sol = solve_maxent(cs, tol, max_iter);
    std::vector<std::string> cols{"iteration"};
    for (int k : sol.powers) cols.push_back("lambda_" + std::to_string(k));
    cols.push_back("residual");
    cols.push_back("objective");
    io::Table t(cols);
    for (const auto& row : sol.trace) {
        std::vector<io::Cell> cells{static_cast<long long>(row.iteration)};
        for (double l : row.multipliers) cells.push_back(l);
        cells.push_back(row.residual);
        cells.push_back(row.objective);
        t.row(cells);
    }
    out.table("maxent_trace", t);
    json sj = sol.to_json();
    sj["constraints"] = cs.to_json();
    out.add("maxent_solution.json", dump(sj));
    out.results = sj;
}

// ----------------------------------------------------------------- kl-fit

AuxFunction parse_aux(const json& v) {
    if (v.is_string()) {
        require(v.get<std::string>() == "neg_log", Errc::validation, "aux must be \"neg_log\" or a table");
        return AuxFunction::negative_log();
    }
    try {
        return AuxFunction::tabulated(v.at("xs").get<std::vector<double>>(), v.at("values").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw Error(Errc::validation, std::string("malformed aux table: ") + e.what());
    }
}

void run_kl_fit(ParamReader& p, Output& out) {
    const DensityModel ref = p.has("reference") ? parse_density(p.raw("reference")) : DensityModel::erlang(1.0, 1);
    const AuxFunction T = p.has("aux") ? parse_aux(p.raw("aux")) : AuxFunction::negative_log();
    const bool by_theta = p.has("theta");
    const bool by_lambda = p.has("lambda");
    require(by_theta != by_lambda, Errc::validation, "give exactly one of theta or lambda");
    const double theta = by_theta ? p.number("theta", 0.0) : 0.0;
    const double lambda = by_lambda ? p.number("lambda", 0.0) : 0.0;
    const std::size_t nodes = p.count("nodes", 2000, 2, 1000000);
    const double x_hi = p.has("x_hi") ? p.positive("x_hi", 1.0) : ref.upper_cutoff(1e-12);
    const bool has_match = p.has("match");
    const DensityModel match = has_match ? parse_density(p.raw("match")) : ref;
    p.finish();
    const KLSolution sol = by_theta ? solve_kl_min({ref, T, theta}) : kl_family_at(ref, T, lambda);
    io::Table t({"x", "rho_star", "rho_ref", "T"});
    const double h = x_hi / static_cast<double>(nodes);
    double linf = 0.0;
    for (std::size_t i = 1; i <= nodes; ++i) {
        const double x = h * static_cast<double>(i);
        const double r = sol.pdf(x);
        if (has_match) linf = std::max(linf, std::abs(r - match.pdf(x)));
        t.row({x, r, ref.pdf(x), T(x)});
    }
    out.table("kl_fit", t);
    out.results = {{"reference", ref.to_json()},
                   {"mode", by_theta ? "theta" : "lambda"},
                   {"lambda", sol.lambda},
                   {"C", sol.C},
                   {"achieved", sol.achieved},
                   {"kl_to_reference", std::log(sol.C) - sol.lambda * sol.achieved}};
    if (by_theta) out.results["theta"] = theta;
    if (has_match) {
        out.results["match"] = match.to_json();
        out.results["linf_vs_match"] = linf;
    }
}

// ---------------------------------------------------------------- spacing

struct EnsembleInfo {
    int dyson_index; // 0: no matrix construction
    int components;
    SurmiseLabel label;
};

EnsembleInfo ensemble_info(const std::string& name) {
    if (name == "goe") return {1, 2, SurmiseLabel::GOE};
    if (name == "gue") return {2, 3, SurmiseLabel::GUE};
    if (name == "ginibre") return {0, 4, SurmiseLabel::Ginibre};
    return {4, 5, SurmiseLabel::GSE};
}

constexpr std::uint64_t kComponentStreams = 1ull << 32;

void run_spacing(ParamReader& p, Output& out, std::uint64_t seed) {
    const auto ensemble = p.choice("ensemble", "goe", {"goe", "gue", "gse", "ginibre"});
    const EnsembleInfo info = ensemble_info(ensemble);
    const auto method = p.choice("method", info.dyson_index ? "matrix" : "components", {"matrix", "components"});
    const std::size_t samples = p.count("samples", 100000, 2, 100000000);
    const std::size_t bins = p.count("bins", 50, 2, 100000);
    const double lo = p.number("lo", 0.0);
    const double hi = p.number("hi", 4.0);
    const bool export_samples = p.get<bool>("export_samples", false);
    const bool compare = p.get<bool>("compare", info.dyson_index != 0);
    p.finish();
    require(method == "components" || info.dyson_index != 0, Errc::unsupported,
            "ginibre gaps come from the four-component construction only");
    require(!compare || info.dyson_index != 0, Errc::unsupported, "ginibre has no matrix sample to compare with");
    const auto s = method == "matrix" ? spacing_from_matrix(info.dyson_index, samples, seed)
                                      : spacing_from_components(info.components, samples, seed, kComponentStreams);
    const DensityModel model = DensityModel::surmise(info.label);
    const HistogramTable h = histogram_table(s, bins, lo, hi, &model);
    out.histogram("spacing_hist", h);
    if (export_samples) {
        io::Table st({"s"});
        for (double v : s) st.row({v});
        out.table("spacing_samples", st);
    }
    out.results = {{"ensemble", ensemble}, {"method", method}, {"samples", samples}, {"bins", bins},
                   {"surmise", to_string(info.label)}};
    out.results.update(histogram_summary_json(h.summary));
    if (compare) {
        const auto other = method == "matrix"
                               ? spacing_from_components(info.components, samples, seed, kComponentStreams)
                               : spacing_from_matrix(info.dyson_index, samples, seed);
        out.results["KS_two_sample"] = ks_two_sample(s, other);
    }
}

// ------------------------------------------------------------------ dyson

std::vector<double> default_snapshots(double t_final, std::size_t count) {
    std::vector<double> out;
    for (std::size_t k = 1; k <= count; ++k) out.push_back(t_final * static_cast<double>(k) / static_cast<double>(count));
    return out;
}

void dump_paths(Output& out, const std::string& stem, const SimulationBundle& b, std::size_t paths, int n) {
    std::vector<std::string> cols{"path_id", "t"};
    for (int i = 0; i < n; ++i) cols.push_back("position_" + std::to_string(i));
    io::Table t(cols);
    for (std::size_t path = 0; path < paths; ++path) {
        for (const auto& snap : b.snapshots) {
            std::vector<io::Cell> cells{static_cast<long long>(path), snap.t};
            for (double x : snap.positions[path]) cells.push_back(x);
            t.row(cells);
        }
    }
    out.table(stem, t);
}

json stats_json(const StepStats& s) {
    return {{"accepted", s.accepted}, {"rejected", s.rejected}, {"ordering_violations", s.ordering_violations}};
}

SdeConfig sde_config(ParamReader& p, std::uint64_t seed) {
    SdeConfig cfg;
    cfg.dt_base = p.positive("dt", 1e-2);
    cfg.dt_min = p.positive("dt_min", cfg.dt_min);
    cfg.max_refine = p.integer("max_refine", cfg.max_refine, 0, 60);
    cfg.adaptive = p.get<bool>("adaptive", true);
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

void run_dyson(ParamReader& p, Output& out, std::uint64_t seed) {
    SimulationRequest rq;
    rq.kind = ProcessKind::dyson;
    rq.n = p.integer("n", 2, 2, 64);
    rq.dyson_index = p.integer("dyson_index", 1, 1, 4);
    require(rq.dyson_index != 3, Errc::validation, "dyson_index must be 1, 2 or 4");
    rq.t_final = p.positive("t_final", 50.0);
    rq.paths = p.count("paths", 10000, 1, 10000000);
    rq.scale2 = p.has("scale2") ? p.positive("scale2", 1.0) : 0.0;
    rq.snapshot_times = p.has("snapshots") ? p.get<std::vector<double>>("snapshots", {})
                                           : default_snapshots(rq.t_final, p.count("snapshot_count", 10, 1, 10000));
    if (p.has("initial")) rq.initial = p.get<std::vector<double>>("initial", {});
    const std::size_t bins = p.count("bins", 10, 2, 100000);
    const double hi = p.number("hi", 4.0);
    const std::size_t dumped = p.count("dump_paths", 0, 0, 1000000);
    const SdeConfig cfg = sde_config(p, seed);
    p.finish();
    require(dumped <= rq.paths, Errc::validation, "dump_paths exceeds paths");
    const SimulationBundle b = simulate(rq, cfg);

    const double a2 = rq.scale2 > 0.0 ? rq.scale2 : static_cast<double>(rq.dyson_index * rq.n);
    const double beta = rq.dyson_index;
    const double n = rq.n;
    const double stationary = (a2 / beta) * (n + beta * n * (n - 1.0) / 2.0);
    io::Table mt({"t", "mean_sum_sq", "stationary_sum_sq", "mean_center"});
    for (const auto& snap : b.snapshots) {
        double sq = 0.0;
        double center = 0.0;
        for (const auto& path : snap.positions) {
            for (double x : path) {
                sq += x * x;
                center += x;
            }
        }
        const double paths = static_cast<double>(snap.positions.size());
        mt.row({snap.t, sq / paths, stationary, center / (paths * n)});
    }
    out.table("dyson_moments", mt);

    std::vector<double> gaps;
    for (const auto& path : b.snapshots.back().positions) {
        for (std::size_t i = 1; i < path.size(); ++i) gaps.push_back(path[i] - path[i - 1]);
    }
    rescale_unit_mean(gaps);
    const SurmiseLabel label = rq.dyson_index == 1 ? SurmiseLabel::GOE
                               : rq.dyson_index == 2 ? SurmiseLabel::GUE
                                                     : SurmiseLabel::GSE;
    const DensityModel model = DensityModel::surmise(label);
    const HistogramTable h = histogram_table(gaps, bins, 0.0, hi, &model);
    out.histogram("dyson_gaps", h);
    if (dumped > 0) dump_paths(out, "dyson_paths", b, dumped, rq.n);

    const auto& last = mt.rows().back();
    const double final_sq = std::get<double>(last[1]);
    out.results = {{"n", rq.n},
                   {"dyson_index", rq.dyson_index},
                   {"scale2", a2},
                   {"t_final", rq.t_final},
                   {"paths", rq.paths},
                   {"dt", cfg.dt_base},
                   {"surmise", to_string(label)},
                   {"gap_histogram", histogram_summary_json(h.summary)},
                   {"stationary_sum_sq", stationary},
                   {"final_sum_sq_rel_error", std::abs(final_sq - stationary) / stationary},
                   {"stats", stats_json(b.stats)}};
}

// -------------------------------------------------------------------- bou

void run_bou(ParamReader& p, Output& out, std::uint64_t seed) {
    SimulationRequest rq;
    rq.kind = ProcessKind::bessel_ou;
    rq.n = p.integer("n", 2, 1, 64);
    rq.t_final = p.positive("t_final", 20.0);
    rq.paths = p.count("paths", 20000, 1, 100000000);
    const double r0 = p.positive("r0", 1.0);
    rq.initial = {r0};
    rq.snapshot_times = p.has("snapshots") ? p.get<std::vector<double>>("snapshots", {})
                                           : default_snapshots(rq.t_final, p.count("snapshot_count", 4, 1, 10000));
    const std::size_t bins = p.count("bins", 64, 2, 100000);
    const double hi = p.number("hi", 4.0);
    const std::size_t kernel_nodes = p.count("kernel_nodes", 400, 2, 1000000);
    const std::size_t dumped = p.count("dump_paths", 0, 0, 1000000);
    const SdeConfig cfg = sde_config(p, seed);
    p.finish();
    require(dumped <= rq.paths, Errc::validation, "dump_paths exceeds paths");
    const SimulationBundle b = simulate(rq, cfg);
    std::vector<double> rs;
    rs.reserve(rq.paths);
    for (const auto& path : b.snapshots.back().positions) rs.push_back(path[0]);
    const DensityModel invariant = DensityModel::bessel_ou(rq.n);
    const HistogramTable h = histogram_table(rs, bins, 0.0, hi, &invariant);
    out.histogram("bou_hist", h);
    if (dumped > 0) dump_paths(out, "bou_paths", b, dumped, 1);

    const int n = rq.n;
    const double t = rq.t_final;
    io::Table kt({"r", "transition_pdf", "invariant_pdf"});
    double sup = 0.0;
    for (std::size_t i = 1; i <= kernel_nodes; ++i) {
        const double r = hi * static_cast<double>(i) / static_cast<double>(kernel_nodes);
        const double k = bessel_ou_transition_pdf(n, r0, r, t);
        sup = std::max(sup, std::abs(k - invariant.pdf(r)));
        kt.row({r, k, invariant.pdf(r)});
    }
    out.table("bou_kernel", kt);
    const double norm = quad::integrate_halfline([&](double r) { return bessel_ou_transition_pdf(n, r0, r, t); });
    const double t1 = 0.3 * std::min(t, 1.0);
    const double t2 = 0.7 * std::min(t, 1.0);
    const double r_end = 1.3;
    const double ck = quad::integrate_halfline(
        [&](double r) { return bessel_ou_transition_pdf(n, r0, r, t1) * bessel_ou_transition_pdf(n, r, r_end, t2); });
    out.results = {{"n", n},
                   {"t_final", t},
                   {"paths", rq.paths},
                   {"r0", r0},
                   {"dt", cfg.dt_base},
                   {"histogram", histogram_summary_json(h.summary)},
                   {"kernel_norm_error", std::abs(norm - 1.0)},
                   {"chapman_kolmogorov_error", std::abs(ck - bessel_ou_transition_pdf(n, r0, r_end, t1 + t2))},
                   {"kernel_sup_vs_invariant", sup},
                   {"stats", stats_json(b.stats)}};
}

// -------------------------------------------------------------- fp-thermo

struct FpDefaults {
    double lo, hi;
    std::size_t nodes;
    double mean, sd, temperature, t_final;
};

FpDefaults fp_defaults(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::harmonic: return {-12.0, 12.0, 1201, 2.0, 0.5, 1.0, 10.0};
        case PotentialKind::bistable: return {-4.0, 4.0, 801, -1.2, 0.3, 0.5, 5.0};
        case PotentialKind::bessel_ou: return {0.01, 6.0, 600, 1.0, 0.2, 0.5, 5.0};
        case PotentialKind::flat: break;
    }
    return {-5.0, 5.0, 501, 0.0, 0.5, 1.0, 5.0};
}

void run_fp_thermo(ParamReader& p, Output& out) {
    json pj = p.has("potential") ? p.raw("potential") : json{{"id", "harmonic"}};
    if (pj.is_string()) pj = json{{"id", pj}};
    Potential pot;
    try {
        pot = Potential::from_json(pj);
    } catch (const json::exception& e) {
        throw Error(Errc::validation, std::string("malformed potential: ") + e.what());
    }
    const FpDefaults d = fp_defaults(pot.kind);
    const double lo = p.number("lo", d.lo);
    const double hi = p.number("hi", d.hi);
    const std::size_t nodes = p.count("nodes", d.nodes, 3, 10000000);
    const double T = p.positive("temperature", d.temperature);
    const double friction = p.positive("friction", 1.0);
    const double t_final = p.positive("t_final", d.t_final);
    const double report_dt = p.positive("report_dt", 0.01);
    const double dt_fraction = p.positive("dt_fraction", 0.5);
    const double mean = p.number("initial_mean", d.mean);
    const double sd = p.positive("initial_sd", d.sd);
    const std::size_t gibbs_steps = p.count("gibbs_steps", 1000, 0, 100000000);
    p.finish();
    require(hi > lo, Errc::validation, "hi must exceed lo");
    require(dt_fraction <= 1.0, Errc::validation, "dt_fraction must not exceed 1");
    const std::size_t reports = static_cast<std::size_t>(std::floor(t_final / report_dt + 1e-9));
    require(reports >= 2 && reports <= 10000000, Errc::validation, "report_dt must split t_final into at least two reports");

    const ThermoSpec spec = ThermoSpec::make(UniformGrid::span(lo, hi, nodes), pot, T, friction);
    const double dt = dt_fraction * stability_bound(spec);
    const GridDensity rho0 =
        GridDensity::tabulate(spec.grid, [&](double x) { return std::exp(-0.5 * (x - mean) * (x - mean) / (sd * sd)); })
            .normalized();
    std::vector<double> times;
    for (std::size_t k = 0; k <= reports; ++k) times.push_back(report_dt * static_cast<double>(k));
    const auto reps = relaxation_run(rho0, spec, dt, times);
    io::Table t({"t", "S", "U", "F", "F_star", "S_int_rate", "Q_rate", "H_c"});
    double identity = 0.0;
    for (const auto& r : reps) {
        identity = std::max(identity, std::abs((r.F - r.F_star) + T * r.H_c));
        t.row({r.t, r.S, r.U, r.F, r.F_star, r.S_int_rate, r.Q_rate, r.H_c});
    }
    out.table("thermo", t);

    const GibbsState g = gibbs_density(spec);
    GridDensity r = g.density;
    for (std::size_t k = 0; k < gibbs_steps; ++k) r = fp_step(r, spec, dt);
    double drift = 0.0;
    for (std::size_t k = 0; k < r.values.size(); ++k) drift = std::max(drift, std::abs(r.values[k] - g.density.values[k]));

    out.results = {{"potential", pot.to_json()},
                   {"temperature", T},
                   {"friction", friction},
                   {"grid", {{"lo", lo}, {"hi", hi}, {"nodes", nodes}}},
                   {"dt", dt},
                   {"reports", reps.size()},
                   {"monotone", true},
                   {"free_energy_identity_error", identity},
                   {"entropy_balance_error", entropy_balance_error(reps, spec)},
                   {"final_F_minus_F_star", reps.back().F - reps.back().F_star},
                   {"Z", g.Z},
                   {"F_star", g.free_energy},
                   {"gibbs_steps", gibbs_steps},
                   {"gibbs_stationarity", drift}};
}

// --------------------------------------------------------------- calogero

void run_calogero(ParamReader& p, Output& out) {
    const auto form = p.choice("form", "singular", {"singular", "two_level", "harmonic"});
    const bool harmonic = form == "harmonic";
    CalogeroSpec spec{form == "singular" ? CalogeroForm::singular : CalogeroForm::two_level,
                      p.number("coupling", form == "two_level" ? 2.0 : 0.0)};
    if (harmonic) spec = {CalogeroForm::two_level, 2.0};
    const int n_max = p.integer("n_max", 3, 0, 20);
    const double x_hi = p.positive("x_hi", 10.0);
    const std::size_t nodes = p.count("nodes", harmonic ? 2001 : 5000, 16, 10000000);
    const auto ext_name = p.choice("extension", "odd", {"odd", "even"});
    p.finish();
    spec.validate();
    const Extension ext = ext_name == "odd" ? Extension::odd : Extension::even;
    const UniformGrid grid = harmonic ? UniformGrid::span(-x_hi, x_hi, nodes) : half_line_grid(x_hi, nodes);
    const ScanResult scan = harmonic ? harmonic_entropy_scan(n_max, grid) : excited_state_entropy_scan(spec, n_max, grid, ext);
    io::Table t({"n", "E_n", "S_q", "S_p", "sum", "deltaX", "deltaP", "product"});
    json states = json::array();
    double worst_rq = 0.0;
    bool chains = true;
    for (const auto& row : scan.rows) {
        const auto& u = row.report;
        t.row({static_cast<long long>(row.n), row.energy, u.S_q, u.S_p, u.sum(), u.delta_x, u.delta_p, u.product()});
        const WaveFunctionGrid psi = harmonic ? hermite_state(row.n, grid) : eigenfunction(spec, row.n, grid);
        const double rq = rayleigh_quotient(spec, psi);
        worst_rq = std::max(worst_rq, std::abs(rq - row.energy));
        chains = chains && u.heisenberg_chain() && u.variance_chain();
        states.push_back({{"n", row.n},
                          {"rayleigh_quotient", rq},
                          {"rayleigh_error", std::abs(rq - row.energy)},
                          {"sign_changes", sign_changes(psi)},
                          {"entropic_slack", u.entropic_slack()},
                          {"heisenberg_chain", u.heisenberg_chain()},
                          {"variance_chain", u.variance_chain()},
                          {"boundary_mass_p", u.boundary_mass_p}});
    }
    out.table("calogero_scan", t);
    out.results = {{"form", form},
                   {"coupling", spec.coupling},
                   {"extension", harmonic ? "none" : ext_name},
                   {"grid", {{"x_hi", x_hi}, {"nodes", nodes}}},
                   {"ground_state_minimal", scan.ground_state_minimal},
                   {"max_rayleigh_error", worst_rq},
                   {"chains_hold", chains},
                   {"states", states}};
    if (!harmonic) out.results["laguerre_order"] = spec.laguerre_order();
}

// ----------------------------------------------------------------- verify

void fill_acceptance(Output& out, const std::vector<CriterionResult>& criteria) {
    io::Table t({"criterion", "name", "status", "detail"});
    json list = json::array();
    for (const auto& c : criteria) {
        t.row({static_cast<long long>(c.id), c.name, c.passed ? "pass" : "fail", c.detail});
        list.push_back({{"criterion", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    out.table("acceptance", t);
    out.result.criteria = criteria;
    std::size_t failed = 0;
    for (const auto& c : criteria) failed += c.passed ? 0 : 1;
    out.results = {{"suite", "acceptance"}, {"criteria", list}, {"failed", failed}};
}

void finalize(Output& out, const ExperimentConfig& config) {
    json summary{{"command", config.command}, {"seed", config.seed}, {"params", config.params},
                 {"results", out.results}};
    out.result.summary = summary;
    out.add("summary.json", dump(summary));
}

ExperimentResult acceptance_pass(const ExperimentConfig& config) {
    Output out;
    out.result.command = config.command;
    out.result.seed = config.seed;
    out.result.format = config.format;
    fill_acceptance(out, run_acceptance_criteria(config.seed));
    finalize(out, config);
    return out.result;
}

constexpr double kSuiteBudgetSeconds = 600.0;

void run_verify(ParamReader& p, Output& out, const ExperimentConfig& config) {
    p.choice("suite", "acceptance", {"acceptance"});
    p.finish();
    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult first = acceptance_pass(config);
    const double first_seconds = seconds_since(start);
    const ExperimentResult second = acceptance_pass(config);
    const bool identical = first.manifest() == second.manifest();
    CriterionResult c12;
    c12.id = 12;
    c12.name = "determinism";
    c12.seconds = first_seconds;
    c12.passed = identical && first_seconds < kSuiteBudgetSeconds;
    c12.detail = std::string(identical ? "manifests identical" : "manifests differ") +
                 (first_seconds < kSuiteBudgetSeconds ? "; within runtime budget" : "; runtime budget exceeded");
    auto criteria = first.criteria;
    criteria.push_back(c12);
    fill_acceptance(out, criteria);
}

const std::vector<std::string> kCommands{"catalog", "entropy-table", "coarse-grain", "maxent", "kl-fit", "spacing",
                                         "dyson",   "bou",           "fp-thermo",    "calogero", "verify"};

}  // namespace

bool ExperimentResult::passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::string ExperimentResult::manifest() const {
    json arts = json::array();
    for (const auto& a : artifacts) {
        arts.push_back({{"name", a.name}, {"bytes", a.content.size()}, {"sha256", io::sha256_hex(a.content)}});
    }
    return dump({{"command", command}, {"seed", seed}, {"format", io::extension(format)}, {"artifacts", arts}});
}

std::vector<std::string> experiment_commands() { return kCommands; }

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    if (std::find(kCommands.begin(), kCommands.end(), config.command) == kCommands.end()) {
        throw Error(Errc::validation, "unknown command '" + config.command + "'");
    }
    Output out;
    out.result.command = config.command;
    out.result.seed = config.seed;
    out.result.format = config.format;
    ParamReader p(config.params);
    const auto& c = config.command;
    if (c == "catalog") run_catalog(p, out);
    else if (c == "entropy-table") run_entropy_table(p, out);
    else if (c == "coarse-grain") run_coarse_grain(p, out);
    else if (c == "maxent") run_maxent(p, out, config.seed);
    else if (c == "kl-fit") run_kl_fit(p, out);
    else if (c == "spacing") run_spacing(p, out, config.seed);
    else if (c == "dyson") run_dyson(p, out, config.seed);
    else if (c == "bou") run_bou(p, out, config.seed);
    else if (c == "fp-thermo") run_fp_thermo(p, out);
    else if (c == "calogero") run_calogero(p, out);
    else run_verify(p, out, config);
    finalize(out, config);
    out.result.seconds = seconds_since(start);
    return out.result;
}

}  // namespace sel
