#pragma once

#include <string>
#include <vector>

#include "fiscast/series.hpp"

namespace fiscast {

enum class DecompMethod { HP, BN };

/// Additive trend/cycle split of a series. trend_t + cycle_t = source_t holds
/// to 1e-9 for every t by construction; the cycle mean is surfaced as a
/// diagnostic rather than forced to zero.
struct Decomposition {
    DecompMethod method;
    AnnualSeries trend;
    AnnualSeries cycle;
    std::string parameter;  // "lambda=100" for HP, "ARIMA(p,1,q)" for BN
    std::string source_name;
    double cycle_mean;
};

/// d-fold first differencing. d = 0 returns the input unchanged.
/// Throws too_short when length <= d.
[[nodiscard]] AnnualSeries difference(const AnnualSeries& series, int d);

/// Reconstructs levels from a d-th-difference forecast given the last d
/// observed levels (chronological order). Satisfies
/// difference(anchors ++ result, d) == diff_forecast.
[[nodiscard]] AnnualSeries undifference(const AnnualSeries& diff_forecast,
                                        const std::vector<double>& anchors);

/// Elementwise natural log; throws non_positive_value naming the first
/// offending year.
[[nodiscard]] AnnualSeries natural_log(const AnnualSeries& series);

/// Elementwise exp; inverse of natural_log.
[[nodiscard]] AnnualSeries exp_inverse(const AnnualSeries& series);

/// Hodrick-Prescott filter: the trend minimizes
///   sum (y_t - tau_t)^2 + lambda * sum (second difference of tau)^2.
/// Solved as the pentadiagonal system (I + lambda K'K) tau = y by banded
/// Cholesky in O(n). Requires length >= 4 and lambda > 0.
[[nodiscard]] Decomposition hp_filter(const AnnualSeries& series, double lambda);

/// How much the HP trend at the second-to-last year moves when the final
/// observation is dropped. A plain endpoint-instability diagnostic.
[[nodiscard]] double hp_endpoint_sensitivity(const AnnualSeries& series, double lambda);

/// Beveridge-Nelson decomposition: fits ARIMA(p,1,q) with drift to the series
/// and takes the trend at t as the long-horizon forecast limit (permanent
/// component) conditional on data through t. Requires length >= p + q + 5.
[[nodiscard]] Decomposition bn_decompose(const AnnualSeries& series, int p, int q);

/// BN permanent component with the ARMA(p,q)-plus-drift model of the first
/// differences supplied instead of estimated (ar/ma/mean as fitted values).
/// Exposed so known-parameter decompositions are possible.
[[nodiscard]] Decomposition bn_decompose_known(const AnnualSeries& series,
                                               const std::vector<double>& ar,
                                               const std::vector<double>& ma, double drift);

}  // namespace fiscast
