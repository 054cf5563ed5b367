#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sel/densities.hpp"
#include "sel/io.hpp"

namespace sel {

/// Fixed-bin histogram on [lo, hi]; densities are normalized by the total
/// sample count, so mass falling outside the range is simply absent.
struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    std::size_t bins() const noexcept { return counts.size(); }
    double width() const noexcept { return (hi - lo) / static_cast<double>(counts.size()); }
    double left(std::size_t i) const noexcept { return lo + width() * static_cast<double>(i); }
    double right(std::size_t i) const noexcept { return i + 1 == counts.size() ? hi : left(i + 1); }
    double density(std::size_t i) const noexcept {
        return static_cast<double>(counts[i]) / (static_cast<double>(total) * width());
    }
};

Histogram make_histogram(std::span<const double> samples, std::size_t bins, double lo, double hi);

/// Exact bin-averaged model density (cell mass / width).
std::vector<double> model_bin_density(const Histogram& h, const DensityModel& model);

/// sum_i |empirical_i - model_i| * width.
double l1_distance(const Histogram& h, const DensityModel& model);

/// -sum p_i ln(p_i / width): differential entropy estimate of the binned sample.
double histogram_entropy(const Histogram& h);

/// sum p_i ln(p_i / q_i) with q_i the model bin mass.
double histogram_kl(const Histogram& h, const DensityModel& model);

/// One-sample Kolmogorov-Smirnov statistic against the model cdf.
double ks_statistic(std::span<const double> samples, const DensityModel& model);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Divides every sample by the empirical mean.
void rescale_unit_mean(std::vector<double>& samples);

struct HistogramSummary {
    double l1 = 0.0;
    double ks = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    bool has_model = false;
};

struct HistogramTable {
    io::Table bins{{"bin_left", "bin_right", "empirical_density", "model_density", "abs_diff"}};
    HistogramSummary summary;

    /// {"bins": [...], "summary": {...}}
    nlohmann::json to_json() const;
};

HistogramTable histogram_table(std::span<const double> samples, std::size_t bins, double lo, double hi,
                               const DensityModel* model);

/// Bin rows followed by the summary row.
std::string histogram_csv(const HistogramTable& table);

/// CSV with columns bin_left, bin_right, empirical_density, model_density,
/// abs_diff (= |empirical - model| * width, so the column sums to L1) and a
/// final summary row. Without a model the model columns are blank and the
/// summary row carries the sample mean and standard deviation.
std::string emit_histogram(std::span<const double> samples, std::size_t bins, double lo, double hi,
                           const DensityModel* model, HistogramSummary* summary = nullptr);

}  // namespace sel
