#include "fiscast/metrics.hpp"

#include <cmath>

#include "fiscast/errors.hpp"

namespace fiscast {

namespace {

void check_lengths(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size() || actual.empty()) {
        raise(errc::length_mismatch, "actual and forecast must be non-empty and equal length");
    }
}

double rms(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

double mean_error(std::span<const double> actual, std::span<const double> forecast) {
    check_lengths(actual, forecast);
    double s = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) s += forecast[t] - actual[t];
    return s / static_cast<double>(actual.size());
}

double mae(std::span<const double> actual, std::span<const double> forecast) {
    check_lengths(actual, forecast);
    double s = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) s += std::fabs(forecast[t] - actual[t]);
    return s / static_cast<double>(actual.size());
}

double smae(std::span<const double> actual, std::span<const double> forecast) {
    check_lengths(actual, forecast);
    double s = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const double scale = (std::fabs(actual[t]) + std::fabs(forecast[t])) / 2.0;
        if (scale == 0.0) {
            raise(errc::both_zero, "actual and forecast both zero at position " +
                                       std::to_string(t));
        }
        s += std::fabs(forecast[t] - actual[t]) / scale;
    }
    return s / static_cast<double>(actual.size());
}

double rmse(std::span<const double> actual, std::span<const double> forecast) {
    check_lengths(actual, forecast);
    double s = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const double e = forecast[t] - actual[t];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(actual.size()));
}

double theil_u1(std::span<const double> actual, std::span<const double> forecast) {
    check_lengths(actual, forecast);
    const double denom = rms(actual) + rms(forecast);
    if (denom == 0.0) raise(errc::both_zero_series, "actual and forecast are identically zero");
    return rmse(actual, forecast) / denom;
}

ErrorTable evaluate(std::span<const double> actual, std::span<const double> forecast,
                    const std::string& label) {
    ErrorTable table;
    table.me = mean_error(actual, forecast);
    table.mae = mae(actual, forecast);
    table.smae = smae(actual, forecast);
    table.rmse = rmse(actual, forecast);
    table.theil_u1 = theil_u1(actual, forecast);
    table.n = actual.size();
    table.label = label;
    if (!error_table_consistent(table)) {
        raise(errc::length_mismatch, "computed error table violates its invariants");
    }
    return table;
}

ErrorTable evaluate(const AnnualSeries& actual, const AnnualSeries& forecast,
                    const std::string& label) {
    if (actual.start_year() != forecast.start_year() || actual.size() != forecast.size()) {
        raise(errc::year_mismatch, "actual and forecast cover different years");
    }
    return evaluate(actual.values(), forecast.values(), label);
}

bool error_table_consistent(const ErrorTable& table) {
    constexpr double slack = 1e-9;
    return table.mae + slack >= std::fabs(table.me) && table.rmse + slack >= table.mae &&
           table.theil_u1 >= -slack && table.theil_u1 <= 1.0 + slack && table.smae >= -slack;
}

ErrorTable accuracy_gain(const ErrorTable& baseline, const ErrorTable& proposed) {
    if (baseline.n != proposed.n) {
        raise(errc::sample_mismatch, "error tables evaluate different sample sizes");
    }
    ErrorTable gain;
    gain.me = baseline.me - proposed.me;
    gain.mae = baseline.mae - proposed.mae;
    gain.smae = baseline.smae - proposed.smae;
    gain.rmse = baseline.rmse - proposed.rmse;
    gain.theil_u1 = baseline.theil_u1 - proposed.theil_u1;
    gain.n = baseline.n;
    gain.label = "Accuracy gain";
    return gain;
}

double relative_efficiency_gain(double baseline_u1, double proposed_u1) {
    if (baseline_u1 <= 0.0) raise(errc::zero_baseline, "baseline U1 must be positive");
    return (baseline_u1 - proposed_u1) / baseline_u1 * 100.0;
}

}  // namespace fiscast
