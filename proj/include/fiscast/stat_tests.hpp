#pragma once

#include <map>
#include <string>
#include <vector>

#include "fiscast/series.hpp"

namespace fiscast {

/// Deterministic terms included in a test regression.
enum class DetSpec { none, constant, constant_trend };

[[nodiscard]] const char* det_spec_name(DetSpec spec) noexcept;

struct TestReport {
    std::string test_name;  // "ADF", "PP", "KPSS", "DFGLS"
    DetSpec spec = DetSpec::constant;
    int lags = 0;
    double statistic = 0.0;
    std::map<std::string, double> critical_values;  // "1%", "5%", "10%"
    bool reject_at_5pct = false;
    std::string null_hypothesis;  // "unit root" or "stationarity"
    std::string p_band;           // coarse p bracket from the critical values
    bool small_sample_warning = false;  // n < 25: all four tests have little power
    std::size_t effective_n = 0;
};

/// Augmented Dickey-Fuller t-test. Lag order picked by AICc on a common
/// sample up to max_lags, then refit on the full usable sample. Critical
/// values from MacKinnon response surfaces evaluated at the effective n.
[[nodiscard]] TestReport adf_test(const AnnualSeries& series, int max_lags,
                                  DetSpec spec = DetSpec::constant);

/// Phillips-Perron Z-tau: the lag-0 Dickey-Fuller t-ratio corrected with a
/// Bartlett-kernel long-run variance, bandwidth floor(4 (n/100)^(2/9)).
[[nodiscard]] TestReport pp_test(const AnnualSeries& series, DetSpec spec = DetSpec::constant);

/// KPSS stationarity test (null: stationary); right-tail rejection against
/// the published 10/5/1% points.
[[nodiscard]] TestReport kpss_test(const AnnualSeries& series,
                                   DetSpec spec = DetSpec::constant);

/// Elliott-Rothenberg-Stock DF-GLS with GLS demeaning (c-bar = -7).
[[nodiscard]] TestReport dfgls_test(const AnnualSeries& series, int max_lags);

struct JohansenReport {
    int lag_order = 0;
    std::vector<double> eigenvalues;            // descending, in [0, 1)
    std::vector<double> max_eigen_statistics;   // -(n - lag) ln(1 - lambda_i)
    std::vector<double> critical_values_5pct;   // per sequential null, dim m-i
    int cointegration_rank = 0;
    std::size_t effective_n = 0;
    std::string deterministic_case = "unrestricted constant";
};

/// Max-eigenvalue Johansen test on all frame columns (2..5 variables).
/// Rank = number of sequentially rejected nulls at 5%.
[[nodiscard]] JohansenReport johansen_max_eigen(const SeriesFrame& frame, int lag_order);

struct StationarityVerdict {
    std::vector<TestReport> per_test;
    bool concordant = false;
    bool stationary = false;  // meaningful when concordant
    std::vector<std::string> recommended_transforms;  // subset of level/diff1/HP/log
};

/// Combines unit-root/stationarity reports on one series, accounting for the
/// KPSS reversed null. Discordant or non-stationary verdicts recommend
/// first-difference and HP data; a strictly positive series with steady
/// compounding growth additionally gets the log recommendation.
/// The series itself is optional; without it the log rule is skipped.
[[nodiscard]] StationarityVerdict stationarity_verdict(const std::vector<TestReport>& reports,
                                                       const AnnualSeries* series = nullptr);

}  // namespace fiscast
