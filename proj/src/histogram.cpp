#include "sel/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "sel/error.hpp"
#include "sel/io.hpp"

namespace sel {

Histogram make_histogram(std::span<const double> samples, std::size_t bins, double lo, double hi) {
    require(bins >= 2, Errc::validation, "histogram needs at least two bins");
    require(hi > lo && std::isfinite(lo) && std::isfinite(hi), Errc::validation,
            "histogram range must have positive width");
    require(!samples.empty(), Errc::empty_sample, "histogram of an empty sample");
    Histogram h{lo, hi, std::vector<std::size_t>(bins, 0), samples.size()};
    const double inv_width = static_cast<double>(bins) / (hi - lo);
    for (double s : samples) {
        if (!(s >= lo) || !(s <= hi)) continue;
        auto idx = static_cast<std::size_t>((s - lo) * inv_width);
        h.counts[std::min(idx, bins - 1)] += 1;
    }
    return h;
}

std::vector<double> model_bin_density(const Histogram& h, const DensityModel& model) {
    std::vector<double> out(h.bins());
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double a = std::max(h.left(i), 0.0);
        const double b = std::max(h.right(i), 0.0);
        out[i] = (model.cdf(b) - model.cdf(a)) / h.width();
    }
    return out;
}

double l1_distance(const Histogram& h, const DensityModel& model) {
    const auto expected = model_bin_density(h, model);
    double l1 = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) l1 += std::abs(h.density(i) - expected[i]) * h.width();
    return l1;
}

double histogram_entropy(const Histogram& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double p = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
        if (p > 0.0) s -= p * std::log(p / h.width());
    }
    return s;
}

double histogram_kl(const Histogram& h, const DensityModel& model) {
    const auto expected = model_bin_density(h, model);
    double kl = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double p = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
        if (p <= 0.0) continue;
        const double q = expected[i] * h.width();
        if (q < 1e-300) throw Error(Errc::support_violation, "model bin mass vanishes under a populated bin");
        kl += p * std::log(p / q);
    }
    return kl;
}

double ks_statistic(std::span<const double> samples, const DensityModel& model) {
    require(!samples.empty(), Errc::empty_sample, "KS statistic of an empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = model.cdf(std::max(sorted[i], 0.0));
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require(!a.empty() && !b.empty(), Errc::empty_sample, "KS statistic of an empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

void rescale_unit_mean(std::vector<double>& samples) {
    require(!samples.empty(), Errc::empty_sample, "cannot rescale an empty sample");
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    require(mean > 0.0, Errc::validation, "sample mean must be positive to rescale");
    for (auto& s : samples) s /= mean;
}

HistogramTable histogram_table(std::span<const double> samples, std::size_t bins, double lo, double hi,
                               const DensityModel* model) {
    const Histogram h = make_histogram(samples, bins, lo, hi);
    HistogramTable out;
    HistogramSummary& sum = out.summary;
    std::vector<double> expected;
    if (model) expected = model_bin_density(h, *model);
    for (std::size_t i = 0; i < h.bins(); ++i) {
        if (model) {
            const double diff = std::abs(h.density(i) - expected[i]) * h.width();
            sum.l1 += diff;
            out.bins.row({h.left(i), h.right(i), h.density(i), expected[i], diff});
        } else {
            out.bins.row({h.left(i), h.right(i), h.density(i), std::monostate{}, std::monostate{}});
        }
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    sum.mean = mean;
    sum.stddev = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;
    if (model) {
        sum.has_model = true;
        sum.ks = ks_statistic(samples, *model);
    }
    return out;
}

nlohmann::json HistogramTable::to_json() const {
    nlohmann::json s = summary.has_model ? nlohmann::json{{"L1", summary.l1}, {"KS", summary.ks}}
                                         : nlohmann::json{{"mean", summary.mean}, {"stddev", summary.stddev}};
    return {{"bins", bins.to_json()}, {"summary", s}};
}

std::string histogram_csv(const HistogramTable& t) {
    std::string out = t.bins.to_csv();
    if (t.summary.has_model) {
        out += "summary,L1," + io::format_double(t.summary.l1) + ",KS," + io::format_double(t.summary.ks) + "\n";
    } else {
        out += "summary,mean," + io::format_double(t.summary.mean) + ",stddev," +
               io::format_double(t.summary.stddev) + "\n";
    }
    return out;
}

std::string emit_histogram(std::span<const double> samples, std::size_t bins, double lo, double hi,
                           const DensityModel* model, HistogramSummary* summary) {
    const HistogramTable t = histogram_table(samples, bins, lo, hi, model);
    if (summary) *summary = t.summary;
    return histogram_csv(t);
}

}  // namespace sel
