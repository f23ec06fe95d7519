#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fiscast/series.hpp"

namespace fiscast {

struct TestResult {
    double statistic = 0.0;
    double p_value = 0.0;
    bool exact = false;  // exact (enumeration) p rather than an approximation
};

/// One predictor's screening outcome: the three correlation coefficients and
/// the significance tests behind the pass/fail call.
struct ScreenReport {
    std::string predictor;
    double r = 0.0;    // Pearson
    double tau = 0.0;  // Kendall tau-b
    double rho = 0.0;  // Spearman
    std::map<std::string, TestResult> tests;  // "t", "chi2", "wilcoxon", "mannwhitney"
    bool passes = false;
    bool is_aggregate = false;
};

struct ScreenOptions {
    double correlation_threshold = 0.7;
    double significance_level = 0.01;
    int chi2_bins = 2;
};

[[nodiscard]] double pearson_r(std::span<const double> x, std::span<const double> y);

/// Tie-corrected tau-b over all pairs.
[[nodiscard]] double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of mid-ranks.
[[nodiscard]] double spearman_rho(std::span<const double> x, std::span<const double> y);

/// One-sample t on the paired differences, two-sided p.
[[nodiscard]] TestResult paired_t_test(std::span<const double> x, std::span<const double> y);

/// Signed-rank test on the nonzero paired differences. Exact (conditional on
/// the observed tie pattern) for up to 25 nonzero differences, normal
/// approximation with tie and continuity correction above.
[[nodiscard]] TestResult wilcoxon_signed_rank(std::span<const double> x,
                                              std::span<const double> y);

/// Rank-sum test; U counts pairs with x above y (ties half). Exact by
/// enumeration when min(nx, ny) <= 10 and nx + ny <= 20.
[[nodiscard]] TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y);

/// Pearson chi-square on a quantile-binned contingency table,
/// (bins-1)^2 degrees of freedom. Requires length >= 3 bins^2.
[[nodiscard]] TestResult chi_square_independence(std::span<const double> x,
                                                 std::span<const double> y, int bins);

/// Screens each predictor (and the predictors' elementwise-sum aggregate)
/// against the target: passes when some correlation magnitude reaches the
/// threshold and both the t and Mann-Whitney tests are significant.
[[nodiscard]] std::vector<ScreenReport> predictor_screen(
    const SeriesFrame& frame, const std::string& target,
    const std::vector<std::string>& predictors, const ScreenOptions& options = {});

}  // namespace fiscast
