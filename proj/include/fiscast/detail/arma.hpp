#pragma once

#include <span>
#include <vector>

// ARMA(p,q) machinery shared by the regression-with-ARIMA-errors estimator
// and the Beveridge-Nelson decomposition: conditional-sum-of-squares fitting
// initialized by Hannan-Rissanen, optimized by Nelder-Mead in partial-
// autocorrelation space (box-reflected at +/-1, which keeps the AR polynomial
// stationary and the MA polynomial invertible at every step).

namespace fiscast::detail {

struct ArmaModel {
    int p = 0;
    int q = 0;
    std::vector<double> ar;   // w_t = mean + sum ar_i (w_{t-i}-mean) + e_t + sum ma_j e_{t-j}
    std::vector<double> ma;
    double mean = 0.0;
    bool include_mean = false;
    double sigma2 = 0.0;   // SS / n_eff
    double loglik = 0.0;   // Gaussian, over the n_eff conditioned terms
    std::size_t n_eff = 0;
    bool converged = true;
    std::vector<double> innovations;  // same indexing as input; first p entries are 0
};

/// Maps partial autocorrelations (each in (-1,1)) to stationary AR
/// coefficients via the Durbin-Levinson recursion.
std::vector<double> pacf_to_ar(std::span<const double> pacf);

/// Inverse of pacf_to_ar; returns false when the coefficients are not
/// stationary (some implied partial autocorrelation leaves (-1,1)).
bool ar_to_pacf(std::span<const double> ar, std::vector<double>& pacf_out);

/// True when the AR polynomial 1 - sum ar_i z^i has all roots outside the
/// unit circle.
bool ar_is_stationary(std::span<const double> ar);

/// True when the MA polynomial 1 + sum ma_j z^j has all roots outside the
/// unit circle.
bool ma_is_invertible(std::span<const double> ma);

/// Conditional innovations: e_t = z_t - sum ar_i z_{t-i} - sum ma_j e_{t-j}
/// with z = w - mean, presample values treated as zero. Entries before p are
/// zero and excluded from any sum of squares.
std::vector<double> arma_innovations(std::span<const double> w, const ArmaModel& model);

/// CSS fit. Orders (0,0) reduce to the (optionally demeaned) input.
ArmaModel fit_arma_css(std::span<const double> w, int p, int q, bool include_mean,
                       double objective_tol = 1e-8, int max_iter = 2000);

/// h-step-ahead forecasts of w given its history and the model's stored
/// conditional innovations.
std::vector<double> arma_forecast(std::span<const double> w, const ArmaModel& model,
                                  int horizon);

}  // namespace fiscast::detail
