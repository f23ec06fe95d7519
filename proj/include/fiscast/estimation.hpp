#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiscast/series.hpp"
#include "fiscast/transforms.hpp"

namespace fiscast {

/// Target/predictor transformation a model was trained under.
enum class TransformTag { level, diff1, hp, log };

[[nodiscard]] const char* transform_name(TransformTag tag) noexcept;

struct InformationCriteria {
    double aic = 0.0;
    double aicc = 0.0;
    double bic = 0.0;
};

/// aic = 2k - 2 loglik; aicc adds the small-sample correction 2k(k+1)/(n-k-1);
/// bic = k ln n - 2 loglik. Throws aicc_undefined when n <= k + 1.
[[nodiscard]] InformationCriteria information_criteria(double loglik, int k, std::size_t n);

struct LinearModel {
    std::map<std::string, double> coefficients;
    std::map<std::string, double> std_errors;
    bool intercept_included = false;
    double intercept = 0.0;
    AnnualSeries residuals;
    double sigma2 = 0.0;  // MLE residual variance, SSR/n
    double loglik = 0.0;
    double r2 = 0.0;
    int n_params = 0;  // regression coefficients, intercept included when present
    std::size_t n_obs = 0;
};

/// OLS of frame[target] on the named predictor columns.
/// R^2 is computed about the mean when an intercept is included, about zero
/// otherwise. Throws rank_deficient / too_few_observations.
[[nodiscard]] LinearModel ols_fit(const SeriesFrame& frame, const std::string& target,
                                  const std::vector<std::string>& predictors, bool intercept);

/// ols_fit with a single predictor.
[[nodiscard]] LinearModel simple_regression(const SeriesFrame& frame, const std::string& target,
                                            const std::string& predictor);

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
};

/// Everything needed to reproduce and invert a transform-tagged fit:
/// last observed levels (diff1 anchors) and last trend value/increment per
/// variable (HP linear trend continuation).
struct TransformContext {
    std::map<std::string, double> last_level;
    std::map<std::string, std::pair<double, double>> trend_anchor;  // (last value, last step)
    double hp_lambda = 0.0;
};

/// Linear regression whose error term follows a stationary, invertible
/// ARMA(p,q) process (d realized through the diff1 transform).
struct RegArimaModel {
    std::string target;
    std::vector<std::string> predictors;
    std::map<std::string, double> coefficients;
    std::map<std::string, double> std_errors;  // from the final (whitened) regression
    bool intercept_included = false;
    double intercept = 0.0;

    ArimaOrder order;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double innovation_variance = 0.0;

    double loglik = 0.0;
    double aic = 0.0;
    double aicc = 0.0;
    double bic = 0.0;
    double r2 = 0.0;  // on the transformed training scale

    TransformTag transform = TransformTag::level;
    TransformContext context;

    AnnualSeries residuals;             // regression residuals, transformed scale
    std::vector<double> innovations;    // ARMA filter innovations of the residuals
    int iterations = 0;
    bool converged = true;
    std::string method;  // estimation recipe stamp
    std::size_t n_effective = 0;
};

struct RegArimaOptions {
    bool intercept = false;       // the fitted equations carry no intercept
    double hp_lambda = 100.0;
    double coef_tol = 1e-6;       // FGLS iteration stop on max coefficient change
    double objective_tol = 1e-8;  // CSS optimizer stop
    int max_fgls_iterations = 50;
};

/// Fits target ~ predictors with ARMA(order.p, order.q) errors under the
/// given transform of all variables (order.d is forced to 1 by diff1 and 0
/// otherwise). Estimation: OLS, then CSS ARMA on the residuals, then GLS
/// re-estimation on innovation-filtered data, iterated to convergence.
[[nodiscard]] RegArimaModel fit_regarima(const SeriesFrame& frame, const std::string& target,
                                         const std::vector<std::string>& predictors,
                                         ArimaOrder order, TransformTag transform,
                                         const RegArimaOptions& options = {});

/// AICc grid search over p, q in [0, grid_max]; ties prefer smaller p+q,
/// then smaller q. d is stamped through from the caller's transform.
[[nodiscard]] ArimaOrder auto_order(const AnnualSeries& residuals, int grid_max_p = 2,
                                    int grid_max_q = 2, int d = 0);

/// Forecasts the holdout at level: regression part from the (level-scale)
/// future predictors plus the ARMA error forecast, then the model's
/// transform is inverted. Throws missing_predictor_years.
[[nodiscard]] AnnualSeries forecast_regarima(const RegArimaModel& model,
                                             const SeriesFrame& future_predictors, int horizon);

struct AR1Model {
    double phi0 = 0.0;
    double innovation_variance = 0.0;
    bool nonstationary_warning = false;  // |phi0| >= 1
};

/// First-order autoregression without intercept: v_t = phi0 v_{t-1} + e_t.
[[nodiscard]] AR1Model ar1_fit(const AnnualSeries& series);

/// Forecast by recursion: phi0^h * last_value.
[[nodiscard]] AnnualSeries ar1_forecast(const AR1Model& model, double last_value,
                                        int first_forecast_year, int horizon,
                                        const std::string& name);
[[nodiscard]] AnnualSeries ar1_forecast(const AR1Model& model, const AnnualSeries& history,
                                        int horizon);

}  // namespace fiscast
