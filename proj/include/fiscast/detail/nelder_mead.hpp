#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

// Derivative-free simplex minimizer for the low-dimensional ARMA objectives
// (at most 4 free parameters here). Standard reflect/expand/contract/shrink
// moves with convergence on the objective spread.

namespace fiscast::detail {

struct NelderMeadResult {
    std::vector<double> x;
    double fmin = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                    std::vector<double> x0, double step, double ftol,
                                    int max_iter) {
    const std::size_t n = x0.size();
    if (n == 0) return {std::move(x0), f({}), 0, true};

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += step;
    std::vector<double> fx(n + 1);
    for (std::size_t j = 0; j <= n; ++j) fx[j] = f(x[j]);

    NelderMeadResult res;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> xs(n + 1);
        std::vector<double> fs(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            xs[k] = x[idx[k]];
            fs[k] = fx[idx[k]];
        }
        x.swap(xs);
        fx.swap(fs);

        if (std::fabs(fx[n] - fx[0]) <= ftol * (std::fabs(fx[0]) + ftol)) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += x[j][i] / static_cast<double>(n);

        auto blend = [&](const std::vector<double>& from, double coef) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + coef * (from[i] - centroid[i]);
            return p;
        };

        auto xr = blend(x[n], -alpha);
        const double fr = f(xr);
        if (fr < fx[0]) {
            auto xe = blend(x[n], -alpha * gamma);
            const double fe = f(xe);
            if (fe < fr) {
                x[n] = std::move(xe);
                fx[n] = fe;
            } else {
                x[n] = std::move(xr);
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = std::move(xr);
            fx[n] = fr;
        } else {
            const bool outside = fr < fx[n];
            auto xc = outside ? blend(xr, rho) : blend(x[n], rho);
            const double fc = f(xc);
            if (fc < std::min(fr, fx[n])) {
                x[n] = std::move(xc);
                fx[n] = fc;
            } else {
                for (std::size_t j = 1; j <= n; ++j) {
                    for (std::size_t i = 0; i < n; ++i)
                        x[j][i] = x[0][i] + sigma * (x[j][i] - x[0][i]);
                    fx[j] = f(x[j]);
                }
            }
        }
    }
    res.iterations = iter;
    res.x = x[0];
    res.fmin = fx[0];
    for (std::size_t j = 1; j <= n; ++j) {
        if (fx[j] < res.fmin) {
            res.fmin = fx[j];
            res.x = x[j];
        }
    }
    return res;
}

}  // namespace fiscast::detail
