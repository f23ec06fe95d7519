#pragma once

#include <span>
#include <string>

#include "fiscast/series.hpp"

namespace fiscast {

/// The five forecast-error measures for one actual/forecast pair.
/// Sign convention throughout: error = forecast - actual, so a positive ME is
/// overestimation.
struct ErrorTable {
    double me = 0.0;
    double mae = 0.0;
    double smae = 0.0;
    double rmse = 0.0;
    double theil_u1 = 0.0;
    std::size_t n = 0;
    std::string label;
};

[[nodiscard]] double mean_error(std::span<const double> actual, std::span<const double> forecast);
[[nodiscard]] double mae(std::span<const double> actual, std::span<const double> forecast);

/// Symmetric MAE: mean of |f - a| / ((|a| + |f|) / 2). Throws both_zero when
/// actual and forecast are both zero at some position.
[[nodiscard]] double smae(std::span<const double> actual, std::span<const double> forecast);

[[nodiscard]] double rmse(std::span<const double> actual, std::span<const double> forecast);

/// Theil's U1 in the bounded form rmse / (rms(actual) + rms(forecast)),
/// always in [0, 1].
[[nodiscard]] double theil_u1(std::span<const double> actual, std::span<const double> forecast);

/// All five measures at once; enforces |ME| <= MAE <= RMSE and U1 in [0, 1].
[[nodiscard]] ErrorTable evaluate(const AnnualSeries& actual, const AnnualSeries& forecast,
                                  const std::string& label);
[[nodiscard]] ErrorTable evaluate(std::span<const double> actual,
                                  std::span<const double> forecast, const std::string& label);

/// True when the measures are mutually consistent (|ME| <= MAE <= RMSE,
/// U1 in [0,1], sMAE >= 0). Always true for tables built by evaluate();
/// used to flag externally reported rows.
[[nodiscard]] bool error_table_consistent(const ErrorTable& table);

/// Elementwise baseline - proposed. Positive entries mean the proposed model
/// is better. The result is a delta table, deliberately not validated.
[[nodiscard]] ErrorTable accuracy_gain(const ErrorTable& baseline, const ErrorTable& proposed);

/// (baseline - proposed) / baseline * 100, on Theil U1 values.
[[nodiscard]] double relative_efficiency_gain(double baseline_u1, double proposed_u1);

}  // namespace fiscast
