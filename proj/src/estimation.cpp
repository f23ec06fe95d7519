#include "fiscast/estimation.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fiscast/detail/arma.hpp"
#include "fiscast/detail/linreg.hpp"
#include "fiscast/errors.hpp"

namespace fiscast {

namespace {

/// Assembles the (n x k) design and target for a frame regression.
void build_design(const SeriesFrame& frame, const std::string& target,
                  const std::vector<std::string>& predictors, bool intercept,
                  Eigen::MatrixXd& X, Eigen::VectorXd& y) {
    const auto n = static_cast<Eigen::Index>(frame.length());
    const auto k = static_cast<Eigen::Index>(predictors.size()) + (intercept ? 1 : 0);
    X.resize(n, k);
    y.resize(n);
    const auto tgt = frame.col(target).values();
    for (Eigen::Index t = 0; t < n; ++t) y(t) = tgt[static_cast<std::size_t>(t)];
    for (std::size_t j = 0; j < predictors.size(); ++j) {
        const auto vals = frame.col(predictors[j]).values();
        for (Eigen::Index t = 0; t < n; ++t)
            X(t, static_cast<Eigen::Index>(j)) = vals[static_cast<std::size_t>(t)];
    }
    if (intercept) X.col(k - 1).setOnes();
}

double r_squared(const Eigen::VectorXd& y, double ssr, bool intercept) {
    double sst = 0.0;
    if (intercept) {
        const double mean = y.mean();
        sst = (y.array() - mean).square().sum();
    } else {
        sst = y.squaredNorm();
    }
    if (sst == 0.0) return ssr == 0.0 ? 1.0 : 0.0;
    return 1.0 - ssr / sst;
}

/// Transforms all of a frame's columns for a tagged fit, recording the
/// anchors needed to undo the transform on forecasts.
SeriesFrame transform_frame(const SeriesFrame& level, TransformTag tag, double hp_lambda,
                            TransformContext& ctx) {
    ctx = TransformContext{};
    ctx.hp_lambda = hp_lambda;
    std::vector<AnnualSeries> cols;
    for (const auto& [name, s] : level.columns()) {
        switch (tag) {
            case TransformTag::level:
                cols.push_back(s);
                break;
            case TransformTag::diff1:
                ctx.last_level[name] = s.back();
                cols.push_back(difference(s, 1));
                break;
            case TransformTag::log:
                cols.push_back(natural_log(s));
                break;
            case TransformTag::hp: {
                auto decomp = hp_filter(s, hp_lambda);
                const auto& trend = decomp.trend;
                const std::size_t n = trend.size();
                const double last = trend[n - 1];
                const double step = n >= 2 ? trend[n - 1] - trend[n - 2] : 0.0;
                ctx.trend_anchor[name] = {last, step};
                cols.push_back(decomp.cycle.renamed(name));
                break;
            }
        }
    }
    return SeriesFrame(std::move(cols));
}

}  // namespace

const char* transform_name(TransformTag tag) noexcept {
    switch (tag) {
        case TransformTag::level: return "level";
        case TransformTag::diff1: return "diff1";
        case TransformTag::hp: return "HP";
        case TransformTag::log: return "log";
    }
    return "?";
}

InformationCriteria information_criteria(double loglik, int k, std::size_t n) {
    if (k < 0) raise(errc::config_error, "parameter count must be non-negative");
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    InformationCriteria ic;
    ic.aic = 2.0 * kd - 2.0 * loglik;
    if (nd <= kd + 1.0) raise(errc::aicc_undefined, "AICc needs n > k + 1");
    ic.aicc = ic.aic + 2.0 * kd * (kd + 1.0) / (nd - kd - 1.0);
    ic.bic = kd * std::log(nd) - 2.0 * loglik;
    return ic;
}

LinearModel ols_fit(const SeriesFrame& frame, const std::string& target,
                    const std::vector<std::string>& predictors, bool intercept) {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    build_design(frame, target, predictors, intercept, X, y);
    if (X.rows() <= X.cols()) {
        raise(errc::too_few_observations, "need more observations than parameters");
    }
    detail::OlsFit fit;
    try {
        fit = detail::ols(X, y);
    } catch (const Error& err) {
        if (err.code() == errc::singular_regression) {
            raise(errc::rank_deficient, "regressor columns are collinear");
        }
        throw;
    }

    LinearModel model;
    for (std::size_t j = 0; j < predictors.size(); ++j) {
        model.coefficients[predictors[j]] = fit.beta(static_cast<Eigen::Index>(j));
        model.std_errors[predictors[j]] = fit.std_errors(static_cast<Eigen::Index>(j));
    }
    model.intercept_included = intercept;
    if (intercept) model.intercept = fit.beta(X.cols() - 1);
    std::vector<double> resid(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
    model.residuals = AnnualSeries(target + "_resid", frame.first_year(), std::move(resid));
    model.n_obs = frame.length();
    model.sigma2 = fit.ssr / static_cast<double>(model.n_obs);
    model.loglik = detail::gaussian_loglik(fit.ssr, model.n_obs);
    model.r2 = r_squared(y, fit.ssr, intercept);
    model.n_params = static_cast<int>(predictors.size()) + (intercept ? 1 : 0);
    return model;
}

LinearModel simple_regression(const SeriesFrame& frame, const std::string& target,
                              const std::string& predictor) {
    return ols_fit(frame, target, {predictor}, /*intercept=*/false);
}

RegArimaModel fit_regarima(const SeriesFrame& frame, const std::string& target,
                           const std::vector<std::string>& predictors, ArimaOrder order,
                           TransformTag transform, const RegArimaOptions& options) {
    if (order.p < 0 || order.q < 0) raise(errc::config_error, "negative ARMA order");
    order.d = transform == TransformTag::diff1 ? 1 : 0;

    RegArimaModel model;
    model.target = target;
    model.predictors = predictors;
    model.transform = transform;
    model.order = order;
    model.intercept_included = options.intercept;
    model.method = "iterated-FGLS+CSS (Hannan-Rissanen init, Nelder-Mead, pacf-reflected)";

    // work on the transformed scale throughout
    std::vector<AnnualSeries> wanted;
    wanted.push_back(frame.col(target));
    for (const auto& p : predictors) wanted.push_back(frame.col(p));
    SeriesFrame working = transform_frame(SeriesFrame(std::move(wanted)), transform,
                                          options.hp_lambda, model.context);

    const int k_reg = static_cast<int>(predictors.size()) + (options.intercept ? 1 : 0);
    const std::size_t n = working.length();
    // needs n - p innovation terms to exceed the criteria parameter count
    if (n <= static_cast<std::size_t>(k_reg + 2 * order.p + order.q + 2)) {
        raise(errc::too_few_observations,
              "effective sample too small for the requested model");
    }

    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    build_design(working, target, predictors, options.intercept, X, y);

    detail::OlsFit ols0;
    try {
        ols0 = detail::ols(X, y);
    } catch (const Error& err) {
        if (err.code() == errc::singular_regression) {
            raise(errc::rank_deficient, "regressor columns are collinear");
        }
        throw;
    }
    Eigen::VectorXd beta = ols0.beta;
    Eigen::VectorXd beta_se = ols0.std_errors;

    detail::ArmaModel arma;
    arma.p = order.p;
    arma.q = order.q;
    int iter = 0;
    double change = 0.0;
    const int n_rows = static_cast<int>(n);

    if (order.p + order.q == 0) {
        Eigen::VectorXd resid = y - X * beta;
        std::vector<double> w(resid.data(), resid.data() + resid.size());
        arma = detail::fit_arma_css(w, 0, 0, /*include_mean=*/false);
        model.converged = true;
    } else {
        for (iter = 1; iter <= options.max_fgls_iterations; ++iter) {
            Eigen::VectorXd resid = y - X * beta;
            std::vector<double> w(resid.data(), resid.data() + resid.size());
            arma = detail::fit_arma_css(w, order.p, order.q, /*include_mean=*/false,
                                        options.objective_tol);

            // whiten target and regressors with the fitted innovation filter,
            // then re-estimate beta on the filtered sample (feasible GLS)
            auto filter = [&](const Eigen::VectorXd& v) {
                std::vector<double> col(v.data(), v.data() + v.size());
                auto e = detail::arma_innovations(col, arma);
                return e;
            };
            const int t0 = order.p;
            const int rows = n_rows - t0;
            Eigen::MatrixXd Xf(rows, X.cols());
            Eigen::VectorXd yf(rows);
            const auto ye = filter(y);
            for (int t = t0; t < n_rows; ++t) yf(t - t0) = ye[static_cast<std::size_t>(t)];
            for (Eigen::Index j = 0; j < X.cols(); ++j) {
                const auto xe = filter(X.col(j));
                for (int t = t0; t < n_rows; ++t)
                    Xf(t - t0, j) = xe[static_cast<std::size_t>(t)];
            }
            Eigen::VectorXd beta_new;
            try {
                auto gls = detail::ols(Xf, yf);
                beta_new = gls.beta;
                beta_se = gls.std_errors;
            } catch (const Error& err) {
                if (err.code() == errc::singular_regression) {
                    raise(errc::rank_deficient, "whitened regressors are collinear");
                }
                throw;
            }
            change = (beta_new - beta).cwiseAbs().maxCoeff();
            beta = beta_new;
            if (change < options.coef_tol) break;
        }
        model.converged = change < 1e-4;
        if (!model.converged) {
            raise(errc::non_convergence,
                  "FGLS iteration cap reached with coefficient change " + std::to_string(change));
        }
        // final error model on the converged residuals
        Eigen::VectorXd resid = y - X * beta;
        std::vector<double> w(resid.data(), resid.data() + resid.size());
        arma = detail::fit_arma_css(w, order.p, order.q, /*include_mean=*/false,
                                    options.objective_tol);
    }

    model.iterations = iter;
    for (std::size_t j = 0; j < predictors.size(); ++j) {
        model.coefficients[predictors[j]] = beta(static_cast<Eigen::Index>(j));
        model.std_errors[predictors[j]] = beta_se(static_cast<Eigen::Index>(j));
    }
    if (options.intercept) model.intercept = beta(X.cols() - 1);

    Eigen::VectorXd resid = y - X * beta;
    std::vector<double> resid_v(resid.data(), resid.data() + resid.size());
    model.residuals = AnnualSeries(target + "_resid", working.first_year(), resid_v);
    model.innovations = arma.innovations;
    model.ar_coeffs = arma.ar;
    model.ma_coeffs = arma.ma;
    model.innovation_variance = arma.sigma2;
    model.loglik = arma.loglik;
    model.n_effective = arma.n_eff;
    model.r2 = r_squared(y, resid.squaredNorm(), options.intercept);

    const int k = k_reg + order.p + order.q + 1;  // + innovation variance
    const auto ic = information_criteria(model.loglik, k, model.n_effective);
    model.aic = ic.aic;
    model.aicc = ic.aicc;
    model.bic = ic.bic;
    return model;
}

ArimaOrder auto_order(const AnnualSeries& residuals, int grid_max_p, int grid_max_q, int d) {
    if (residuals.size() < 10) raise(errc::too_short, "order search needs 10+ observations");
    std::vector<double> w(residuals.values().begin(), residuals.values().end());

    ArimaOrder best{0, d, 0};
    double best_aicc = std::numeric_limits<double>::infinity();
    // all cells conditioned on the same grid_max_p first values so the
    // criteria compare like with like
    for (int p = 0; p <= grid_max_p; ++p) {
        for (int q = 0; q <= grid_max_q; ++q) {
            double aicc;
            try {
                auto m = detail::fit_arma_css(w, p, q, /*include_mean=*/false);
                double ss = 0.0;
                int counted = 0;
                for (std::size_t t = static_cast<std::size_t>(grid_max_p); t < w.size(); ++t) {
                    ss += m.innovations[t] * m.innovations[t];
                    ++counted;
                }
                const double ll = detail::gaussian_loglik(ss, static_cast<std::size_t>(counted));
                aicc = information_criteria(ll, p + q + 1, static_cast<std::size_t>(counted))
                           .aicc;
            } catch (const Error&) {
                continue;  // an unfittable cell simply drops out; (0,0) never throws
            }
            const bool better =
                aicc < best_aicc - 1e-12 ||
                (std::fabs(aicc - best_aicc) <= 1e-12 &&
                 (p + q < best.p + best.q || (p + q == best.p + best.q && q < best.q)));
            if (better) {
                best_aicc = aicc;
                best = ArimaOrder{p, d, q};
            }
        }
    }
    return best;
}

AnnualSeries forecast_regarima(const RegArimaModel& model, const SeriesFrame& future_predictors,
                               int horizon) {
    if (horizon <= 0) raise(errc::config_error, "horizon must be positive");
    const int first_year = model.residuals.end_year() + 1;
    const int last_year = first_year + horizon - 1;
    for (const auto& name : model.predictors) {
        if (!future_predictors.has(name) || future_predictors.first_year() > first_year ||
            future_predictors.last_year() < last_year) {
            raise(errc::missing_predictor_years,
                  "future predictors must cover " + std::to_string(first_year) + "-" +
                      std::to_string(last_year) + " for '" + name + "'");
        }
    }

    // transform the future predictor values onto the training scale
    auto transformed_predictor = [&](const std::string& name, int year) -> double {
        const double level = future_predictors.col(name).at_year(year);
        switch (model.transform) {
            case TransformTag::level:
                return level;
            case TransformTag::log:
                if (level <= 0.0) {
                    raise(errc::non_positive_value,
                          "log transform needs positive predictor values");
                }
                return std::log(level);
            case TransformTag::diff1: {
                const double prev = year - 1 >= future_predictors.first_year() &&
                                            future_predictors.col(name).covers_year(year - 1)
                                        ? future_predictors.col(name).at_year(year - 1)
                                        : model.context.last_level.at(name);
                return level - prev;
            }
            case TransformTag::hp: {
                const auto& [last, step] = model.context.trend_anchor.at(name);
                const double trend = last + step * static_cast<double>(year - (first_year - 1));
                return level - trend;
            }
        }
        return level;
    };

    // ARMA forecast of the error term from the stored residual history
    std::vector<double> w(model.residuals.values().begin(), model.residuals.values().end());
    detail::ArmaModel arma;
    arma.p = model.order.p;
    arma.q = model.order.q;
    arma.ar = model.ar_coeffs;
    arma.ma = model.ma_coeffs;
    arma.innovations = model.innovations;
    const auto err_forecast = detail::arma_forecast(w, arma, horizon);

    std::vector<double> transformed(static_cast<std::size_t>(horizon), 0.0);
    for (int h = 0; h < horizon; ++h) {
        const int year = first_year + h;
        double pred = model.intercept_included ? model.intercept : 0.0;
        for (const auto& name : model.predictors) {
            pred += model.coefficients.at(name) * transformed_predictor(name, year);
        }
        transformed[static_cast<std::size_t>(h)] = pred + err_forecast[static_cast<std::size_t>(h)];
    }

    // invert the transform back to levels
    const std::string out_name = model.target + "_forecast";
    switch (model.transform) {
        case TransformTag::level:
            return AnnualSeries(out_name, first_year, std::move(transformed));
        case TransformTag::log: {
            for (auto& v : transformed) v = std::exp(v);
            return AnnualSeries(out_name, first_year, std::move(transformed));
        }
        case TransformTag::diff1: {
            AnnualSeries diffs(out_name, first_year, std::move(transformed));
            return undifference(diffs, {model.context.last_level.at(model.target)});
        }
        case TransformTag::hp: {
            const auto& [last, step] = model.context.trend_anchor.at(model.target);
            for (int h = 0; h < horizon; ++h) {
                transformed[static_cast<std::size_t>(h)] +=
                    last + step * static_cast<double>(h + 1);
            }
            return AnnualSeries(out_name, first_year, std::move(transformed));
        }
    }
    raise(errc::config_error, "unknown transform tag");
}

AR1Model ar1_fit(const AnnualSeries& series) {
    if (series.size() < 4) raise(errc::too_short, "AR(1) fit needs at least 4 observations");
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        num += series[t] * series[t - 1];
        den += series[t - 1] * series[t - 1];
    }
    if (den == 0.0) raise(errc::zero_variance, "lagged series is identically zero");
    AR1Model model;
    model.phi0 = num / den;
    double ss = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double e = series[t] - model.phi0 * series[t - 1];
        ss += e * e;
    }
    model.innovation_variance = ss / static_cast<double>(series.size() - 1);
    model.nonstationary_warning = std::fabs(model.phi0) >= 1.0;
    return model;
}

AnnualSeries ar1_forecast(const AR1Model& model, double last_value, int first_forecast_year,
                          int horizon, const std::string& name) {
    if (horizon <= 0) raise(errc::config_error, "horizon must be positive");
    std::vector<double> out(static_cast<std::size_t>(horizon));
    double level = last_value;
    for (int h = 0; h < horizon; ++h) {
        level *= model.phi0;
        out[static_cast<std::size_t>(h)] = level;
    }
    return AnnualSeries(name, first_forecast_year, std::move(out));
}

AnnualSeries ar1_forecast(const AR1Model& model, const AnnualSeries& history, int horizon) {
    return ar1_forecast(model, history.back(), history.end_year() + 1, horizon,
                        history.name() + "_forecast");
}

}  // namespace fiscast
