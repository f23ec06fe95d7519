#include "fiscast/transforms.hpp"

#include <cmath>
#include <numeric>

#include "fiscast/detail/arma.hpp"
#include "fiscast/errors.hpp"

namespace fiscast {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Solves (I + lambda K'K) tau = y for the second-difference matrix K.
/// The system is symmetric positive definite and pentadiagonal; a banded
/// Cholesky factorization keeps the solve O(n).
std::vector<double> hp_trend_solve(std::span<const double> y, double lambda) {
    const std::size_t n = y.size();
    // band of A = I + lambda K'K: main diagonal, first and second subdiagonal
    std::vector<double> a0(n, 1.0), a1(n > 1 ? n - 1 : 0, 0.0), a2(n > 2 ? n - 2 : 0, 0.0);
    constexpr double stencil[3] = {1.0, -2.0, 1.0};
    for (std::size_t t = 0; t + 2 < n; ++t) {
        for (int i = 0; i < 3; ++i) {
            a0[t + i] += lambda * stencil[i] * stencil[i];
            if (i + 1 < 3) a1[t + i] += lambda * stencil[i] * stencil[i + 1];
            if (i + 2 < 3) a2[t + i] += lambda * stencil[i] * stencil[i + 2];
        }
    }

    // banded Cholesky A = L L', L with diagonal d and subdiagonals e, f
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0), f(n > 2 ? n - 2 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = a0[i];
        if (i >= 1) diag -= e[i - 1] * e[i - 1];
        if (i >= 2) diag -= f[i - 2] * f[i - 2];
        d[i] = std::sqrt(diag);
        if (i + 1 < n) {
            double sub = a1[i];
            if (i >= 1) sub -= e[i - 1] * f[i - 1];
            e[i] = sub / d[i];
        }
        if (i + 2 < n) f[i] = a2[i] / d[i];
    }

    // forward then backward substitution
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double rhs = y[i];
        if (i >= 1) rhs -= e[i - 1] * z[i - 1];
        if (i >= 2) rhs -= f[i - 2] * z[i - 2];
        z[i] = rhs / d[i];
    }
    std::vector<double> tau(n);
    for (std::size_t ri = 0; ri < n; ++ri) {
        const std::size_t i = n - 1 - ri;
        double rhs = z[i];
        if (i + 1 < n) rhs -= e[i] * tau[i + 1];
        if (i + 2 < n) rhs -= f[i] * tau[i + 2];
        tau[i] = rhs / d[i];
    }
    return tau;
}

Decomposition make_decomposition(DecompMethod method, const AnnualSeries& source,
                                 std::vector<double> trend, std::string parameter) {
    std::vector<double> cycle(source.size());
    for (std::size_t t = 0; t < source.size(); ++t) cycle[t] = source[t] - trend[t];
    const double cmean = mean_of(cycle);
    return Decomposition{
        method,
        AnnualSeries(source.name() + "_trend", source.start_year(), std::move(trend)),
        AnnualSeries(source.name() + "_cycle", source.start_year(), std::move(cycle)),
        std::move(parameter),
        source.name(),
        cmean,
    };
}

Decomposition bn_from_model(const AnnualSeries& series, const detail::ArmaModel& model,
                            std::string parameter) {
    // permanent component at t: y_t plus all forecastable future deviations of
    // the differences from drift, conditional on data through t
    const std::size_t n = series.size();
    std::vector<double> w(n - 1);
    for (std::size_t t = 1; t < n; ++t) w[t - 1] = series[t] - series[t - 1];

    const auto innovations = detail::arma_innovations(w, model);
    const int p = model.p;
    const int q = model.q;

    std::vector<double> trend(n);
    trend[0] = series[0];
    for (std::size_t t = 1; t < n; ++t) {
        // information set: w[0 .. t-1]
        const int m = static_cast<int>(t);
        double sum_future = 0.0;
        // recursive forecast of the demeaned differences
        std::vector<double> buf;  // forecast deviations, index 0 = one step ahead
        const int max_h = 100000;
        int small_streak = 0;
        for (int h = 1; h <= max_h; ++h) {
            double pred = 0.0;
            for (int i = 1; i <= p; ++i) {
                const int idx = m + h - 1 - i;
                double zv;
                if (idx >= m)
                    zv = buf[idx - m];
                else if (idx >= 0)
                    zv = w[idx] - model.mean;
                else
                    zv = 0.0;
                pred += model.ar[i - 1] * zv;
            }
            for (int j = 1; j <= q; ++j) {
                const int idx = m + h - 1 - j;
                if (idx >= 0 && idx < m) pred += model.ma[j - 1] * innovations[idx];
            }
            buf.push_back(pred);
            sum_future += pred;
            // oscillating AR forecasts can cross zero, so demand a streak of
            // negligible terms before truncating the tail sum
            if (h > q && std::fabs(pred) < 1e-13 * (1.0 + std::fabs(sum_future))) {
                if (++small_streak >= 3) break;
            } else {
                small_streak = 0;
            }
        }
        trend[t] = series[t] + sum_future;
    }
    return make_decomposition(DecompMethod::BN, series, std::move(trend), std::move(parameter));
}

}  // namespace

AnnualSeries difference(const AnnualSeries& series, int d) {
    if (d < 0) raise(errc::config_error, "differencing order must be non-negative");
    if (d == 0) return series;
    if (series.size() <= static_cast<std::size_t>(d)) {
        raise(errc::too_short, "cannot difference " + std::to_string(series.size()) +
                                   " observations " + std::to_string(d) + " times");
    }
    std::vector<double> v(series.values().begin(), series.values().end());
    for (int round = 0; round < d; ++round) {
        for (std::size_t t = 0; t + 1 < v.size(); ++t) v[t] = v[t + 1] - v[t];
        v.pop_back();
    }
    return AnnualSeries(series.name(), series.start_year() + d, std::move(v));
}

AnnualSeries undifference(const AnnualSeries& diff_forecast, const std::vector<double>& anchors) {
    if (anchors.empty()) raise(errc::missing_anchor, "undifference needs the last observed levels");
    const int d = static_cast<int>(anchors.size());
    // state holds the last d reconstructed levels
    std::vector<double> state(anchors);
    std::vector<double> out;
    out.reserve(diff_forecast.size());
    for (std::size_t t = 0; t < diff_forecast.size(); ++t) {
        double next = diff_forecast[t];
        // invert the d-fold difference via the binomial expansion
        double sign = 1.0;
        double coef = 1.0;
        for (int k = 1; k <= d; ++k) {
            coef = coef * static_cast<double>(d - k + 1) / static_cast<double>(k);
            sign = -sign;
            next -= sign * coef * state[static_cast<std::size_t>(d - k)];
        }
        out.push_back(next);
        state.erase(state.begin());
        state.push_back(next);
    }
    return AnnualSeries(diff_forecast.name(), diff_forecast.start_year(), std::move(out));
}

AnnualSeries natural_log(const AnnualSeries& series) {
    std::vector<double> v;
    v.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (series[t] <= 0.0) {
            raise(errc::non_positive_value,
                  "series '" + series.name() + "' is not strictly positive in year " +
                      std::to_string(series.start_year() + static_cast<int>(t)));
        }
        v.push_back(std::log(series[t]));
    }
    return AnnualSeries(series.name(), series.start_year(), std::move(v));
}

AnnualSeries exp_inverse(const AnnualSeries& series) {
    std::vector<double> v;
    v.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) v.push_back(std::exp(series[t]));
    return AnnualSeries(series.name(), series.start_year(), std::move(v));
}

Decomposition hp_filter(const AnnualSeries& series, double lambda) {
    if (series.size() < 4) raise(errc::too_short, "HP filter needs at least 4 observations");
    if (lambda <= 0.0) raise(errc::config_error, "HP lambda must be positive");
    auto trend = hp_trend_solve(series.values(), lambda);
    return make_decomposition(DecompMethod::HP, series, std::move(trend),
                              "lambda=" + std::to_string(lambda));
}

double hp_endpoint_sensitivity(const AnnualSeries& series, double lambda) {
    if (series.size() < 5) raise(errc::too_short, "endpoint diagnostic needs 5 observations");
    const auto full = hp_filter(series, lambda);
    const auto reduced =
        hp_filter(series.slice_years(series.start_year(), series.end_year() - 1), lambda);
    const int year = series.end_year() - 1;
    return std::fabs(full.trend.at_year(year) - reduced.trend.at_year(year));
}

Decomposition bn_decompose(const AnnualSeries& series, int p, int q) {
    if (p < 0 || q < 0) raise(errc::config_error, "BN orders must be non-negative");
    if (series.size() < static_cast<std::size_t>(p + q + 5)) {
        raise(errc::too_short, "BN decomposition needs at least p + q + 5 observations");
    }
    std::vector<double> w(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) w[t - 1] = series[t] - series[t - 1];
    detail::ArmaModel model;
    try {
        model = detail::fit_arma_css(w, p, q, /*include_mean=*/true);
    } catch (const Error& err) {
        if (err.code() == errc::non_invertible) {
            raise(errc::non_convergence, "BN difference model estimation failed");
        }
        throw;
    }
    if (!model.converged) raise(errc::non_convergence, "BN difference model did not converge");
    return bn_from_model(series, model,
                         "ARIMA(" + std::to_string(p) + ",1," + std::to_string(q) + ")");
}

Decomposition bn_decompose_known(const AnnualSeries& series, const std::vector<double>& ar,
                                 const std::vector<double>& ma, double drift) {
    if (series.size() < ar.size() + ma.size() + 3) {
        raise(errc::too_short, "series too short for the supplied BN model");
    }
    detail::ArmaModel model;
    model.p = static_cast<int>(ar.size());
    model.q = static_cast<int>(ma.size());
    model.ar = ar;
    model.ma = ma;
    model.mean = drift;
    model.include_mean = true;
    if (!detail::ar_is_stationary(model.ar) || !detail::ma_is_invertible(model.ma)) {
        raise(errc::non_invertible, "supplied BN model is not stationary/invertible");
    }
    return bn_from_model(series, model,
                         "ARIMA(" + std::to_string(model.p) + ",1," + std::to_string(model.q) +
                             ") fixed");
}

}  // namespace fiscast
