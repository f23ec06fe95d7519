#include "fiscast/detail/arma.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "fiscast/detail/linreg.hpp"
#include "fiscast/detail/nelder_mead.hpp"
#include "fiscast/errors.hpp"

namespace fiscast::detail {

namespace {

constexpr double kPacfBound = 1.0 - 1e-6;

// Fold a value back into [-bound, bound] by reflecting at the walls.
double reflect_into(double v, double bound) {
    for (int guard = 0; guard < 64 && std::fabs(v) > bound; ++guard) {
        if (v > bound) v = 2.0 * bound - v;
        if (v < -bound) v = -2.0 * bound - v;
    }
    if (std::fabs(v) > bound) v = std::copysign(bound, v);
    return v;
}

double sample_mean(std::span<const double> w) {
    return std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
}

double css(std::span<const double> w, const std::vector<double>& ar,
           const std::vector<double>& ma, double mean) {
    const int p = static_cast<int>(ar.size());
    const int q = static_cast<int>(ma.size());
    const int n = static_cast<int>(w.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    double ss = 0.0;
    for (int t = p; t < n; ++t) {
        double pred = 0.0;
        for (int i = 1; i <= p; ++i) pred += ar[i - 1] * (w[t - i] - mean);
        for (int j = 1; j <= q; ++j)
            if (t - j >= p) pred += ma[j - 1] * e[t - j];
        e[t] = (w[t] - mean) - pred;
        ss += e[t] * e[t];
    }
    return ss;
}

// Hannan-Rissanen two-stage initial values; returns false when the long-AR
// regression cannot be run on this sample.
bool hannan_rissanen(std::span<const double> w, int p, int q, bool include_mean,
                     std::vector<double>& ar0, std::vector<double>& ma0, double& mean0) {
    const int n = static_cast<int>(w.size());
    int h = std::max(p + q, static_cast<int>(std::round(
                                std::pow(static_cast<double>(n), 1.0 / 3.0))));
    h = std::min(h, n / 2 - 1);
    if (h < 1 || n - h <= h + 2) return false;

    const int rows = n - h;
    const int kc = include_mean ? 1 : 0;
    Eigen::MatrixXd X(rows, h + kc);
    Eigen::VectorXd y(rows);
    for (int t = h; t < n; ++t) {
        y(t - h) = w[t];
        for (int i = 1; i <= h; ++i) X(t - h, i - 1) = w[t - i];
        if (include_mean) X(t - h, h) = 1.0;
    }
    Eigen::VectorXd resid;
    try {
        auto fit = ols(X, y);
        resid = fit.residuals;
    } catch (const Error&) {
        return false;
    }
    // residuals aligned with t = h..n-1; second stage regresses w_t on its own
    // lags and lagged residuals
    const int t0 = h + std::max(p, q);
    const int rows2 = n - t0;
    if (rows2 <= p + q + kc + 1) return false;
    Eigen::MatrixXd X2(rows2, p + q + kc);
    Eigen::VectorXd y2(rows2);
    for (int t = t0; t < n; ++t) {
        y2(t - t0) = w[t];
        for (int i = 1; i <= p; ++i) X2(t - t0, i - 1) = w[t - i];
        for (int j = 1; j <= q; ++j) X2(t - t0, p + j - 1) = resid(t - j - h);
        if (kc) X2(t - t0, p + q) = 1.0;
    }
    try {
        auto fit2 = ols(X2, y2);
        for (int i = 0; i < p; ++i) ar0[i] = fit2.beta(i);
        for (int j = 0; j < q; ++j) ma0[j] = fit2.beta(p + j);
        if (include_mean) {
            double denom = 1.0;
            for (int i = 0; i < p; ++i) denom -= ar0[i];
            mean0 = std::fabs(denom) > 1e-8 ? fit2.beta(p + q) / denom : sample_mean(w);
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

}  // namespace

std::vector<double> pacf_to_ar(std::span<const double> pacf) {
    std::vector<double> a(pacf.begin(), pacf.end());
    std::vector<double> prev(a.size(), 0.0);
    for (std::size_t k = 1; k < a.size() + 1; ++k) {
        const double zeta = pacf[k - 1];
        for (std::size_t i = 0; i + 1 < k; ++i) prev[i] = a[i] - zeta * a[k - 2 - i];
        for (std::size_t i = 0; i + 1 < k; ++i) a[i] = prev[i];
        a[k - 1] = zeta;
    }
    return a;
}

bool ar_to_pacf(std::span<const double> ar, std::vector<double>& pacf_out) {
    std::vector<double> a(ar.begin(), ar.end());
    pacf_out.assign(a.size(), 0.0);
    for (std::size_t k = a.size(); k >= 1; --k) {
        const double zeta = a[k - 1];
        pacf_out[k - 1] = zeta;
        if (std::fabs(zeta) >= 1.0) return false;
        const double denom = 1.0 - zeta * zeta;
        std::vector<double> prev(k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i)
            prev[i] = (a[i] + zeta * a[k - 2 - i]) / denom;
        a = std::move(prev);
    }
    return true;
}

bool ar_is_stationary(std::span<const double> ar) {
    std::vector<double> tmp;
    return ar_to_pacf(ar, tmp);
}

bool ma_is_invertible(std::span<const double> ma) {
    // 1 + sum ma_j z^j has roots outside the circle iff the dual AR
    // coefficients -ma_j are stationary
    std::vector<double> dual(ma.size());
    for (std::size_t j = 0; j < ma.size(); ++j) dual[j] = -ma[j];
    return ar_is_stationary(dual);
}

std::vector<double> arma_innovations(std::span<const double> w, const ArmaModel& model) {
    const int p = model.p;
    const int q = model.q;
    const int n = static_cast<int>(w.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int t = p; t < n; ++t) {
        double pred = 0.0;
        for (int i = 1; i <= p; ++i) pred += model.ar[i - 1] * (w[t - i] - model.mean);
        for (int j = 1; j <= q; ++j)
            if (t - j >= p) pred += model.ma[j - 1] * e[t - j];
        e[t] = (w[t] - model.mean) - pred;
    }
    return e;
}

ArmaModel fit_arma_css(std::span<const double> w, int p, int q, bool include_mean,
                       double objective_tol, int max_iter) {
    const int n = static_cast<int>(w.size());
    if (n <= p + q + 1) raise(errc::too_short, "ARMA fit needs more observations than parameters");

    ArmaModel model;
    model.p = p;
    model.q = q;
    model.include_mean = include_mean;
    model.ar.assign(static_cast<std::size_t>(p), 0.0);
    model.ma.assign(static_cast<std::size_t>(q), 0.0);
    model.mean = include_mean ? sample_mean(w) : 0.0;

    if (p + q > 0) {
        std::vector<double> ar0(static_cast<std::size_t>(p), 0.0);
        std::vector<double> ma0(static_cast<std::size_t>(q), 0.0);
        double mean0 = model.mean;
        const bool hr_ok = hannan_rissanen(w, p, q, include_mean, ar0, ma0, mean0);

        auto pack = [&](const std::vector<double>& ar, const std::vector<double>& ma,
                        double mean) {
            std::vector<double> x;
            std::vector<double> zeta;
            if (!ar_to_pacf(ar, zeta)) zeta.assign(static_cast<std::size_t>(p), 0.0);
            x.insert(x.end(), zeta.begin(), zeta.end());
            std::vector<double> dual(ma.size());
            for (std::size_t j = 0; j < ma.size(); ++j) dual[j] = -ma[j];
            if (!ar_to_pacf(dual, zeta)) zeta.assign(static_cast<std::size_t>(q), 0.0);
            x.insert(x.end(), zeta.begin(), zeta.end());
            if (include_mean) x.push_back(mean);
            return x;
        };
        auto unpack = [&](std::span<const double> x, std::vector<double>& ar,
                          std::vector<double>& ma, double& mean) {
            std::vector<double> zeta(static_cast<std::size_t>(p));
            for (int i = 0; i < p; ++i) zeta[i] = reflect_into(x[i], kPacfBound);
            ar = pacf_to_ar(zeta);
            zeta.assign(static_cast<std::size_t>(q), 0.0);
            for (int j = 0; j < q; ++j) zeta[j] = reflect_into(x[p + j], kPacfBound);
            auto dual = pacf_to_ar(zeta);
            ma.resize(static_cast<std::size_t>(q));
            for (int j = 0; j < q; ++j) ma[j] = -dual[j];
            mean = include_mean ? x[p + q] : 0.0;
        };

        auto objective = [&](std::span<const double> x) {
            std::vector<double> ar, ma;
            double mean;
            unpack(x, ar, ma, mean);
            const double ss = css(w, ar, ma, mean);
            const double n_eff = static_cast<double>(n - p);
            return n_eff * std::log(std::max(ss / n_eff, 1e-300));
        };

        NelderMeadResult best;
        best.fmin = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> starts;
        if (hr_ok) starts.push_back(pack(ar0, ma0, mean0));
        starts.push_back(pack(std::vector<double>(static_cast<std::size_t>(p), 0.0),
                              std::vector<double>(static_cast<std::size_t>(q), 0.0),
                              model.mean));
        for (auto& s : starts) {
            auto r = nelder_mead(objective, s, 0.2, objective_tol, max_iter);
            if (r.fmin < best.fmin) best = std::move(r);
        }
        model.converged = best.converged;
        unpack(best.x, model.ar, model.ma, model.mean);
    }

    model.innovations = arma_innovations(w, model);
    double ss = 0.0;
    for (int t = p; t < n; ++t) ss += model.innovations[t] * model.innovations[t];
    model.n_eff = static_cast<std::size_t>(n - p);
    model.sigma2 = ss / static_cast<double>(model.n_eff);
    model.loglik = gaussian_loglik(ss, model.n_eff);

    if (!ar_is_stationary(model.ar) || !ma_is_invertible(model.ma)) {
        raise(errc::non_invertible, "optimizer returned a non-stationary or non-invertible "
                                    "error process");
    }
    return model;
}

std::vector<double> arma_forecast(std::span<const double> w, const ArmaModel& model,
                                  int horizon) {
    const int p = model.p;
    const int q = model.q;
    const int n = static_cast<int>(w.size());
    std::vector<double> z(w.size());
    for (int t = 0; t < n; ++t) z[t] = w[t] - model.mean;

    std::vector<double> out(static_cast<std::size_t>(horizon), 0.0);
    auto z_at = [&](int idx) -> double {
        if (idx < 0) return 0.0;
        if (idx < n) return z[idx];
        return out[idx - n];
    };
    auto e_at = [&](int idx) -> double {
        if (idx < 0 || idx >= n) return 0.0;  // future innovations expect to zero
        return model.innovations[idx];
    };
    for (int h = 0; h < horizon; ++h) {
        const int t = n + h;
        double pred = 0.0;
        for (int i = 1; i <= p; ++i) pred += model.ar[i - 1] * z_at(t - i);
        for (int j = 1; j <= q; ++j) pred += model.ma[j - 1] * e_at(t - j);
        out[h] = pred;
    }
    for (auto& v : out) v += model.mean;
    return out;
}

}  // namespace fiscast::detail
