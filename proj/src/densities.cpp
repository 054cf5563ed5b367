#include "sel/densities.hpp"

#include <cmath>
#include <limits>

#include "sel/error.hpp"
#include "sel/special_fns.hpp"

namespace sel {

using special::digamma;
using special::ln_gamma;
using special::pi;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

PowerExponential surmise_shape(SurmiseLabel label) {
    switch (label) {
        case SurmiseLabel::Poisson: return {1.0, 0, 1.0, 1};
        case SurmiseLabel::SemiPoisson2: return {4.0, 1, 2.0, 1};
        case SurmiseLabel::SemiPoisson3: return {27.0 / 2.0, 2, 3.0, 1};
        case SurmiseLabel::SemiPoisson5: return {3125.0 / 24.0, 4, 5.0, 1};
        case SurmiseLabel::GOE: return {pi / 2.0, 1, pi / 4.0, 2};
        case SurmiseLabel::GUE: return {32.0 / (pi * pi), 2, 4.0 / pi, 2};
        case SurmiseLabel::Ginibre: return {81.0 * pi * pi / 128.0, 3, 9.0 * pi / 16.0, 2};
        case SurmiseLabel::GSE: return {262144.0 / (729.0 * pi * pi * pi), 4, 64.0 / (9.0 * pi), 2};
        case SurmiseLabel::P0: return {2.0 / pi, 0, 1.0 / pi, 2};
    }
    throw Error(Errc::validation, "unknown surmise label");
}

// Normalized coef * s^power * exp(-rate * s^stretch).
PowerExponential normalized_shape(int power, int stretch, double rate) {
    const double nu = (power + 1.0) / stretch;
    const double log_coef = std::log(static_cast<double>(stretch)) + nu * std::log(rate) - ln_gamma(nu);
    return {std::exp(log_coef), power, rate, stretch};
}

PowerExponential make_shape(const DensityModel::Params& params) {
    return std::visit(
        overloaded{
            [](const GenericFamilyParams& p) {
                require(p.beta_rep >= 0 && p.beta_rep <= 4, Errc::validation, "generic family needs beta_rep in 0..4");
                require(p.alpha_str == 1 || p.alpha_str == 2, Errc::validation, "generic family needs alpha_str in {1, 2}");
                require(p.scale > 0.0 && std::isfinite(p.scale), Errc::validation, "generic family needs scale > 0");
                return normalized_shape(p.beta_rep, p.alpha_str, std::pow(p.scale, -p.alpha_str));
            },
            [](const ErlangParams& p) {
                require(p.rate > 0.0 && std::isfinite(p.rate), Errc::validation, "erlang needs rate > 0");
                require(p.shape >= 1 && p.shape <= 64, Errc::validation, "erlang needs shape in 1..64");
                return normalized_shape(p.shape - 1, 1, p.rate);
            },
            [](const BesselOUParams& p) {
                require(p.dim >= 1 && p.dim <= 64, Errc::validation, "bessel_ou needs dim in 1..64");
                return normalized_shape(p.dim - 1, 2, 1.0);
            },
            [](const HalfLineGaussianParams& p) {
                require(p.sigma2 > 0.0 && std::isfinite(p.sigma2), Errc::validation, "half_line_gaussian needs sigma2 > 0");
                return PowerExponential{std::sqrt(2.0 / (pi * p.sigma2)), 0, 0.5 / p.sigma2, 2};
            },
            [](const SurmiseParams& p) { return surmise_shape(p.label); },
        },
        params);
}

double shape_nu(const PowerExponential& sh, int k = 0) { return (sh.power + 1.0 + k) / sh.stretch; }

}  // namespace

std::string to_string(SurmiseLabel label) {
    switch (label) {
        case SurmiseLabel::Poisson: return "poisson";
        case SurmiseLabel::SemiPoisson2: return "semi_poisson_2";
        case SurmiseLabel::SemiPoisson3: return "semi_poisson_3";
        case SurmiseLabel::SemiPoisson5: return "semi_poisson_5";
        case SurmiseLabel::GOE: return "goe";
        case SurmiseLabel::GUE: return "gue";
        case SurmiseLabel::Ginibre: return "ginibre";
        case SurmiseLabel::GSE: return "gse";
        case SurmiseLabel::P0: return "p0";
    }
    return "?";
}

SurmiseLabel surmise_from_string(const std::string& name) {
    for (auto label : {SurmiseLabel::Poisson, SurmiseLabel::SemiPoisson2, SurmiseLabel::SemiPoisson3,
                       SurmiseLabel::SemiPoisson5, SurmiseLabel::GOE, SurmiseLabel::GUE,
                       SurmiseLabel::Ginibre, SurmiseLabel::GSE, SurmiseLabel::P0}) {
        if (to_string(label) == name) return label;
    }
    throw Error(Errc::validation, "unknown surmise label '" + name + "'");
}

DensityModel::DensityModel(Params params) : params_(params), shape_(make_shape(params)) {}

DensityModel DensityModel::generic(int beta_rep, int alpha_str, double scale) {
    return DensityModel(GenericFamilyParams{beta_rep, alpha_str, scale});
}
DensityModel DensityModel::erlang(double rate, int shape) { return DensityModel(ErlangParams{rate, shape}); }
DensityModel DensityModel::bessel_ou(int dim) { return DensityModel(BesselOUParams{dim}); }
DensityModel DensityModel::half_line_gaussian(double sigma2) {
    return DensityModel(HalfLineGaussianParams{sigma2});
}
DensityModel DensityModel::surmise(SurmiseLabel label) { return DensityModel(SurmiseParams{label}); }

std::string DensityModel::kind_name() const {
    return std::visit(overloaded{
                          [](const GenericFamilyParams&) { return std::string("generic"); },
                          [](const ErlangParams&) { return std::string("erlang"); },
                          [](const BesselOUParams&) { return std::string("bessel_ou"); },
                          [](const HalfLineGaussianParams&) { return std::string("half_line_gaussian"); },
                          [](const SurmiseParams&) { return std::string("surmise"); },
                      },
                      params_);
}

std::string DensityModel::label() const {
    auto num = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    return std::visit(
        overloaded{
            [&](const GenericFamilyParams& p) {
                return "generic(beta=" + std::to_string(p.beta_rep) + ",alpha=" + std::to_string(p.alpha_str) +
                       ",scale=" + num(p.scale) + ")";
            },
            [&](const ErlangParams& p) {
                return "erlang(rate=" + num(p.rate) + ",n=" + std::to_string(p.shape) + ")";
            },
            [&](const BesselOUParams& p) { return "bessel_ou(n=" + std::to_string(p.dim) + ")"; },
            [&](const HalfLineGaussianParams& p) { return "half_line_gaussian(sigma2=" + num(p.sigma2) + ")"; },
            [&](const SurmiseParams& p) { return to_string(p.label); },
        },
        params_);
}

double DensityModel::log_pdf(double s) const {
    require(s >= 0.0, Errc::domain, "density evaluated at negative s");
    if (s == 0.0) {
        return shape_.power == 0 ? std::log(shape_.coef) : -std::numeric_limits<double>::infinity();
    }
    if (std::isinf(s)) return -std::numeric_limits<double>::infinity();
    return std::log(shape_.coef) + shape_.power * std::log(s) - shape_.rate * std::pow(s, shape_.stretch);
}

double DensityModel::pdf(double s) const {
    require(s >= 0.0, Errc::domain, "density evaluated at negative s");
    if (s == 0.0) return shape_.power == 0 ? shape_.coef : 0.0;
    return std::exp(log_pdf(s));
}

double DensityModel::cdf(double s) const {
    require(s >= 0.0, Errc::domain, "cdf evaluated at negative s");
    return special::gamma_p(shape_nu(shape_), shape_.rate * std::pow(s, shape_.stretch));
}

double DensityModel::survival(double s) const {
    require(s >= 0.0, Errc::domain, "survival evaluated at negative s");
    return special::gamma_q(shape_nu(shape_), shape_.rate * std::pow(s, shape_.stretch));
}

double DensityModel::moment(int k) const {
    require(k >= 0 && k <= 32, Errc::domain, "moment order must be in 0..32");
    const double nu = shape_nu(shape_, k);
    return shape_.coef *
           std::exp(ln_gamma(nu) - nu * std::log(shape_.rate) - std::log(static_cast<double>(shape_.stretch)));
}

double DensityModel::variance() const {
    const double m1 = moment(1);
    return moment(2) - m1 * m1;
}

double DensityModel::upper_cutoff(double tail) const {
    double hi = 1.0;
    while (survival(hi) >= tail) hi *= 2.0;
    double lo = hi / 2.0;
    if (survival(lo) < tail) return lo;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (survival(mid) < tail ? hi : lo) = mid;
    }
    return hi;
}

double DensityModel::draw(Stream& stream) const {
    const int components = shape_.power + 1;
    if (shape_.stretch == 1) {
        double total = 0.0;
        for (int i = 0; i < components; ++i) total += stream.exponential(shape_.rate);
        return total;
    }
    double norm2 = 0.0;
    for (int i = 0; i < components; ++i) {
        const double x = stream.normal();
        norm2 += x * x;
    }
    return std::sqrt(norm2 / (2.0 * shape_.rate));
}

std::vector<double> DensityModel::sample(Stream& stream, std::size_t count) const {
    require(count >= 1, Errc::validation, "sample count must be >= 1");
    std::vector<double> out(count);
    for (auto& v : out) v = draw(stream);
    return out;
}

nlohmann::json DensityModel::to_json() const {
    nlohmann::json params = std::visit(
        overloaded{
            [](const GenericFamilyParams& p) {
                return nlohmann::json{{"beta_rep", p.beta_rep}, {"alpha_str", p.alpha_str}, {"scale", p.scale}};
            },
            [](const ErlangParams& p) { return nlohmann::json{{"rate", p.rate}, {"shape", p.shape}}; },
            [](const BesselOUParams& p) { return nlohmann::json{{"dim", p.dim}}; },
            [](const HalfLineGaussianParams& p) { return nlohmann::json{{"sigma2", p.sigma2}}; },
            [](const SurmiseParams& p) { return nlohmann::json{{"label", to_string(p.label)}}; },
        },
        params_);
    return {{"kind", kind_name()}, {"params", params}};
}

DensityModel DensityModel::from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const nlohmann::json p = j.value("params", nlohmann::json::object());
        if (kind == "generic") {
            return generic(p.at("beta_rep").get<int>(), p.at("alpha_str").get<int>(), p.value("scale", 1.0));
        }
        if (kind == "erlang") return erlang(p.at("rate").get<double>(), p.at("shape").get<int>());
        if (kind == "bessel_ou") return bessel_ou(p.at("dim").get<int>());
        if (kind == "half_line_gaussian") return half_line_gaussian(p.at("sigma2").get<double>());
        if (kind == "surmise") return surmise(surmise_from_string(p.at("label").get<std::string>()));
        throw Error(Errc::validation, "unknown density kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::validation, std::string("malformed density json: ") + e.what());
    }
}

bool operator==(const DensityModel& a, const DensityModel& b) { return a.params_ == b.params_; }

std::vector<DensityModel> surmise_catalog() {
    std::vector<DensityModel> out;
    for (auto label : {SurmiseLabel::Poisson, SurmiseLabel::SemiPoisson2, SurmiseLabel::SemiPoisson3,
                       SurmiseLabel::SemiPoisson5, SurmiseLabel::GOE, SurmiseLabel::GUE,
                       SurmiseLabel::Ginibre, SurmiseLabel::GSE, SurmiseLabel::P0}) {
        out.push_back(DensityModel::surmise(label));
    }
    return out;
}

namespace {

double erlang_entropy(double rate, int n) {
    return ln_gamma(n) + (1.0 - n) * digamma(n) + n - std::log(rate);
}

double half_gaussian_entropy(double sigma2) { return 0.5 * (std::log(sigma2 * pi / 2.0) + 1.0); }

}  // namespace

double bessel_ou_entropy_uncorrected(int dim) {
    require(dim >= 1, Errc::validation, "bessel_ou needs dim >= 1");
    const double h = 0.5 * dim;
    return ln_gamma(h) - 0.5 * (dim - 1) * digamma(h) + 0.5 * (dim - 1);
}

double shannon_entropy_closed(const DensityModel& model) {
    return std::visit(
        overloaded{
            [](const ErlangParams& p) { return erlang_entropy(p.rate, p.shape); },
            [](const BesselOUParams& p) {
                const double h = 0.5 * p.dim;
                return ln_gamma(h) - std::log(2.0) - 0.5 * (p.dim - 1) * digamma(h) + h;
            },
            [](const HalfLineGaussianParams& p) { return half_gaussian_entropy(p.sigma2); },
            [&](const SurmiseParams& p) -> double {
                switch (p.label) {
                    case SurmiseLabel::Poisson: return erlang_entropy(1.0, 1);
                    case SurmiseLabel::SemiPoisson2: return erlang_entropy(2.0, 2);
                    case SurmiseLabel::SemiPoisson3: return erlang_entropy(3.0, 3);
                    case SurmiseLabel::SemiPoisson5: return erlang_entropy(5.0, 5);
                    case SurmiseLabel::P0: return half_gaussian_entropy(pi / 2.0);
                    default:
                        throw Error(Errc::unsupported,
                                    "no closed-form entropy for " + model.label() + "; use quadrature");
                }
            },
            [&](const GenericFamilyParams&) -> double {
                throw Error(Errc::unsupported, "no closed-form entropy for " + model.label() + "; use quadrature");
            },
        },
        model.params());
}

DensityModel normalize_unit_mean(const DensityModel& model) {
    const double mean = model.mean();
    require(mean > 0.0 && std::isfinite(mean), Errc::validation, "model has no finite positive mean");
    return std::visit(overloaded{
                          [&](const GenericFamilyParams& p) {
                              return DensityModel::generic(p.beta_rep, p.alpha_str, p.scale / mean);
                          },
                          [&](const ErlangParams& p) { return DensityModel::erlang(p.rate * mean, p.shape); },
                          [&](const BesselOUParams& p) {
                              require(p.dim <= 5, Errc::unsupported,
                                      "rescaled bessel_ou is only representable for dim <= 5");
                              return DensityModel::generic(p.dim - 1, 2, 1.0 / mean);
                          },
                          [&](const HalfLineGaussianParams& p) {
                              return DensityModel::half_line_gaussian(p.sigma2 / (mean * mean));
                          },
                          [&](const SurmiseParams&) { return model; },
                      },
                      model.params());
}

}  // namespace sel
