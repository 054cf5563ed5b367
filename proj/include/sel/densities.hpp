#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sel/random.hpp"

// Closed-form probability laws on the half-line s >= 0.

namespace sel {

enum class SurmiseLabel { Poisson, SemiPoisson2, SemiPoisson3, SemiPoisson5, GOE, GUE, Ginibre, GSE, P0 };

/// c s^beta exp(-(s/scale)^alpha), beta in 0..4, alpha in {1, 2}.
struct GenericFamilyParams {
    int beta_rep = 0;
    int alpha_str = 1;
    double scale = 1.0;

    friend bool operator==(const GenericFamilyParams&, const GenericFamilyParams&) = default;
};

/// (rate, shape)-Erlang law: n-fold convolution of exponentials.
struct ErlangParams {
    double rate = 1.0;
    int shape = 1;

    friend bool operator==(const ErlangParams&, const ErlangParams&) = default;
};

/// Invariant law of the radial OU process built from `dim` components.
struct BesselOUParams {
    int dim = 1;

    friend bool operator==(const BesselOUParams&, const BesselOUParams&) = default;
};

/// |X| for X ~ N(0, sigma2).
struct HalfLineGaussianParams {
    double sigma2 = 1.0;

    friend bool operator==(const HalfLineGaussianParams&, const HalfLineGaussianParams&) = default;
};

/// Fixed, unit-mean spacing laws with their printed coefficients.
struct SurmiseParams {
    SurmiseLabel label = SurmiseLabel::GOE;

    friend bool operator==(const SurmiseParams&, const SurmiseParams&) = default;
};

/// Every supported law has the shape coef * s^power * exp(-rate * s^stretch).
struct PowerExponential {
    double coef;
    int power;
    double rate;
    int stretch;
};

class DensityModel {
public:
    using Params = std::variant<GenericFamilyParams, ErlangParams, BesselOUParams,
                                HalfLineGaussianParams, SurmiseParams>;

    explicit DensityModel(Params params);

    static DensityModel generic(int beta_rep, int alpha_str, double scale = 1.0);
    static DensityModel erlang(double rate, int shape);
    static DensityModel bessel_ou(int dim);
    static DensityModel half_line_gaussian(double sigma2);
    static DensityModel surmise(SurmiseLabel label);

    const Params& params() const noexcept { return params_; }
    const PowerExponential& shape() const noexcept { return shape_; }
    std::string kind_name() const;
    std::string label() const;

    double pdf(double s) const;
    double log_pdf(double s) const;
    double cdf(double s) const;
    double survival(double s) const;
    double moment(int k) const;
    double mean() const { return moment(1); }
    double variance() const;

    /// Smallest grid point s (doubling search) with survival(s) < tail.
    double upper_cutoff(double tail = 1e-16) const;

    double draw(Stream& stream) const;
    std::vector<double> sample(Stream& stream, std::size_t count) const;

    nlohmann::json to_json() const;
    static DensityModel from_json(const nlohmann::json& j);

    friend bool operator==(const DensityModel& a, const DensityModel& b);

private:
    Params params_;
    PowerExponential shape_;
};

std::string to_string(SurmiseLabel label);
SurmiseLabel surmise_from_string(const std::string& name);

/// All nine catalog entries in a fixed order.
std::vector<DensityModel> surmise_catalog();

/// Closed-form Shannon entropy. Bessel-OU uses the quadrature-validated form
/// ln G(n/2) - ln 2 - ((n-1)/2) psi(n/2) + n/2; the frequently quoted variant
/// ln G(n/2) - ((n-1)/2) psi(n/2) + (n-1)/2 is off by exactly ln 2 - 1/2
/// (its n = 1 value (1/2) ln pi versus the true 0.3786).
/// Throws Errc::unsupported for laws without a closed form here.
double shannon_entropy_closed(const DensityModel& model);

/// The uncorrected Bessel-OU entropy expression, kept for the discrepancy check.
double bessel_ou_entropy_uncorrected(int dim);

/// Rescales s so that <s> = 1. Catalog entries are fixed points.
DensityModel normalize_unit_mean(const DensityModel& model);

}  // namespace sel
