#include "fiscast/stat_tests.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fiscast/critical_values.hpp"
#include "fiscast/detail/linreg.hpp"
#include "fiscast/errors.hpp"
#include "fiscast/series.hpp"

namespace fiscast {

namespace {

namespace cv = critical_values;

constexpr std::size_t kSmallSampleFloor = 25;

int bartlett_bandwidth(std::size_t n) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

/// Bartlett-kernel long-run variance of a (not demeaned) residual vector.
double long_run_variance(const Eigen::VectorXd& u, int bandwidth) {
    const auto n = u.size();
    const double nd = static_cast<double>(n);
    double lrv = u.squaredNorm() / nd;
    for (int j = 1; j <= bandwidth; ++j) {
        double gamma = 0.0;
        for (Eigen::Index t = j; t < n; ++t) gamma += u(t) * u(t - j);
        gamma /= nd;
        lrv += 2.0 * (1.0 - static_cast<double>(j) / (bandwidth + 1.0)) * gamma;
    }
    return lrv;
}

const cv::ResponseSurface& df_surface(DetSpec spec) {
    switch (spec) {
        case DetSpec::none: return cv::kTauNone;
        case DetSpec::constant: return cv::kTauConstant;
        case DetSpec::constant_trend: return cv::kTauConstantTrend;
    }
    return cv::kTauConstant;
}

std::map<std::string, double> df_critical_values(DetSpec spec, std::size_t n_eff) {
    const auto& table = df_surface(spec);
    const double nd = static_cast<double>(n_eff);
    return {{"1%", cv::dickey_fuller_cv(table, 0, nd)},
            {"5%", cv::dickey_fuller_cv(table, 1, nd)},
            {"10%", cv::dickey_fuller_cv(table, 2, nd)}};
}

/// Coarse p bracket from the three critical values. left_tail selects the
/// rejection direction.
std::string p_band_from(double stat, const std::map<std::string, double>& cvs, bool left_tail) {
    const double c1 = cvs.at("1%"), c5 = cvs.at("5%"), c10 = cvs.at("10%");
    const bool beyond1 = left_tail ? stat < c1 : stat > c1;
    const bool beyond5 = left_tail ? stat < c5 : stat > c5;
    const bool beyond10 = left_tail ? stat < c10 : stat > c10;
    if (beyond1) return "p < 0.01";
    if (beyond5) return "0.01 <= p < 0.05";
    if (beyond10) return "0.05 <= p < 0.10";
    return "p >= 0.10";
}

struct DfRegression {
    double t_stat = 0.0;      // t-ratio on the lagged level
    double rho_coef = 0.0;
    double rho_se = 0.0;
    double resid_var = 0.0;   // dof-corrected
    Eigen::VectorXd residuals;
    std::size_t n_eff = 0;
};

/// Dickey-Fuller regression: delta y_t on y_{t-1}, k lagged differences and
/// deterministic terms, over t = start_t .. n-1 (start_t at least k+1).
DfRegression df_regression(std::span<const double> y, int k_lags, DetSpec spec, int start_t) {
    const int n = static_cast<int>(y.size());
    const int rows = n - start_t;
    const int k_det = spec == DetSpec::none ? 0 : (spec == DetSpec::constant ? 1 : 2);
    const int cols = 1 + k_lags + k_det;
    if (rows <= cols) raise(errc::too_short, "not enough observations for the test regression");

    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd dy(rows);
    for (int t = start_t; t < n; ++t) {
        const int r = t - start_t;
        dy(r) = y[t] - y[t - 1];
        X(r, 0) = y[t - 1];
        for (int i = 1; i <= k_lags; ++i) X(r, i) = y[t - i] - y[t - i - 1];
        if (k_det >= 1) X(r, 1 + k_lags) = 1.0;
        if (k_det >= 2) X(r, 2 + k_lags) = static_cast<double>(t);
    }
    auto fit = detail::ols(X, dy);
    DfRegression out;
    out.rho_coef = fit.beta(0);
    out.rho_se = fit.std_errors(0);
    if (out.rho_se <= 0.0) raise(errc::singular_regression, "zero standard error");
    out.t_stat = out.rho_coef / out.rho_se;
    out.resid_var = fit.ssr / static_cast<double>(rows - cols);
    out.residuals = fit.residuals;
    out.n_eff = static_cast<std::size_t>(rows);
    return out;
}

/// AICc lag choice for the DF regression on a common sample.
int select_df_lags(std::span<const double> y, int max_lags, DetSpec spec) {
    const int n = static_cast<int>(y.size());
    const int start_t = max_lags + 1;
    int best_k = 0;
    double best_aicc = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= max_lags; ++k) {
        double aicc;
        try {
            const auto reg = df_regression(y, k, spec, start_t);
            const std::size_t rows = reg.n_eff;
            const int k_det = spec == DetSpec::none ? 0 : (spec == DetSpec::constant ? 1 : 2);
            const int n_par = 1 + k + k_det + 1;
            const double ssr = reg.resid_var *
                               static_cast<double>(rows - static_cast<std::size_t>(1 + k + k_det));
            const double ll = detail::gaussian_loglik(ssr, rows);
            if (rows <= static_cast<std::size_t>(n_par + 1)) continue;
            const double kd = n_par, nd = static_cast<double>(rows);
            aicc = 2.0 * kd - 2.0 * ll + 2.0 * kd * (kd + 1.0) / (nd - kd - 1.0);
        } catch (const Error&) {
            continue;
        }
        if (aicc < best_aicc) {
            best_aicc = aicc;
            best_k = k;
        }
    }
    (void)n;
    return best_k;
}

TestReport finish_unit_root_report(std::string name, DetSpec spec, int lags, double stat,
                                   std::map<std::string, double> cvs, std::size_t n_eff,
                                   std::size_t n_total) {
    TestReport rep;
    rep.test_name = std::move(name);
    rep.spec = spec;
    rep.lags = lags;
    rep.statistic = stat;
    rep.reject_at_5pct = stat < cvs.at("5%");
    rep.p_band = p_band_from(stat, cvs, /*left_tail=*/true);
    rep.critical_values = std::move(cvs);
    rep.null_hypothesis = "unit root";
    rep.small_sample_warning = n_total < kSmallSampleFloor;
    rep.effective_n = n_eff;
    return rep;
}

}  // namespace

const char* det_spec_name(DetSpec spec) noexcept {
    switch (spec) {
        case DetSpec::none: return "none";
        case DetSpec::constant: return "constant";
        case DetSpec::constant_trend: return "constant+trend";
    }
    return "?";
}

TestReport adf_test(const AnnualSeries& series, int max_lags, DetSpec spec) {
    if (max_lags < 0) raise(errc::config_error, "max_lags must be non-negative");
    if (series.size() < static_cast<std::size_t>(max_lags + 8)) {
        raise(errc::too_short, "ADF needs at least max_lags + 8 observations");
    }
    const auto y = series.values();
    const int k = max_lags > 0 ? select_df_lags(y, max_lags, spec) : 0;
    const auto reg = df_regression(y, k, spec, k + 1);
    auto cvs = df_critical_values(spec, reg.n_eff);
    return finish_unit_root_report("ADF", spec, k, reg.t_stat, std::move(cvs), reg.n_eff,
                                   series.size());
}

TestReport pp_test(const AnnualSeries& series, DetSpec spec) {
    if (series.size() < 10) raise(errc::too_short, "PP needs at least 10 observations");
    const auto y = series.values();
    const auto reg = df_regression(y, 0, spec, 1);

    const double nd = static_cast<double>(reg.n_eff);
    const double gamma0 = reg.residuals.squaredNorm() / nd;
    const double lam2 = long_run_variance(reg.residuals, bartlett_bandwidth(reg.n_eff));
    if (lam2 <= 0.0 || gamma0 <= 0.0) raise(errc::singular_regression, "degenerate residuals");
    const double s = std::sqrt(reg.resid_var);
    const double z_tau = std::sqrt(gamma0 / lam2) * reg.t_stat -
                         (lam2 - gamma0) * nd * reg.rho_se / (2.0 * std::sqrt(lam2) * s);

    auto cvs = df_critical_values(spec, reg.n_eff);
    auto rep = finish_unit_root_report("PP", spec, 0, z_tau, std::move(cvs), reg.n_eff,
                                       series.size());
    rep.lags = bartlett_bandwidth(reg.n_eff);
    return rep;
}

TestReport kpss_test(const AnnualSeries& series, DetSpec spec) {
    if (spec == DetSpec::none) raise(errc::config_error, "KPSS needs constant or trend spec");
    if (series.size() < 10) raise(errc::too_short, "KPSS needs at least 10 observations");
    const auto y = series.values();
    const int n = static_cast<int>(y.size());

    Eigen::MatrixXd X(n, spec == DetSpec::constant ? 1 : 2);
    Eigen::VectorXd yv(n);
    for (int t = 0; t < n; ++t) {
        yv(t) = y[t];
        X(t, 0) = 1.0;
        if (spec == DetSpec::constant_trend) X(t, 1) = static_cast<double>(t + 1);
    }
    auto fit = detail::ols(X, yv);

    double cumsum = 0.0, s2_sum = 0.0;
    for (int t = 0; t < n; ++t) {
        cumsum += fit.residuals(t);
        s2_sum += cumsum * cumsum;
    }
    const double lam2 = long_run_variance(fit.residuals, bartlett_bandwidth(series.size()));
    if (lam2 <= 0.0) raise(errc::singular_regression, "degenerate residuals");
    const double nd = static_cast<double>(n);
    const double stat = s2_sum / (nd * nd) / lam2;

    const auto& points = spec == DetSpec::constant ? cv::kKpssConstant : cv::kKpssTrend;
    std::map<std::string, double> cvs = {
        {"1%", points[0]}, {"5%", points[1]}, {"10%", points[2]}};

    TestReport rep;
    rep.test_name = "KPSS";
    rep.spec = spec;
    rep.lags = bartlett_bandwidth(series.size());
    rep.statistic = stat;
    rep.reject_at_5pct = stat > cvs.at("5%");
    rep.p_band = p_band_from(stat, cvs, /*left_tail=*/false);
    rep.critical_values = std::move(cvs);
    rep.null_hypothesis = "stationarity";
    rep.small_sample_warning = series.size() < kSmallSampleFloor;
    rep.effective_n = series.size();
    return rep;
}

TestReport dfgls_test(const AnnualSeries& series, int max_lags) {
    if (max_lags < 0) raise(errc::config_error, "max_lags must be non-negative");
    if (series.size() < static_cast<std::size_t>(max_lags + 10)) {
        raise(errc::too_short, "DF-GLS needs at least max_lags + 10 observations");
    }
    const auto y = series.values();
    const int n = static_cast<int>(y.size());

    // GLS demeaning with c-bar = -7: quasi-difference, regress on the
    // quasi-differenced constant, subtract the fitted mean
    const double alpha = 1.0 + -7.0 / static_cast<double>(n);
    Eigen::VectorXd z(n), x(n);
    z(0) = y[0];
    x(0) = 1.0;
    for (int t = 1; t < n; ++t) {
        z(t) = y[t] - alpha * y[t - 1];
        x(t) = 1.0 - alpha;
    }
    const double delta = x.dot(z) / x.dot(x);
    std::vector<double> demeaned(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) demeaned[static_cast<std::size_t>(t)] = y[t] - delta;

    const int k = max_lags > 0 ? select_df_lags(demeaned, max_lags, DetSpec::none) : 0;
    const auto reg = df_regression(demeaned, k, DetSpec::none, k + 1);
    auto cvs = df_critical_values(DetSpec::none, reg.n_eff);
    auto rep = finish_unit_root_report("DFGLS", DetSpec::constant, k, reg.t_stat,
                                       std::move(cvs), reg.n_eff, series.size());
    return rep;
}

JohansenReport johansen_max_eigen(const SeriesFrame& frame, int lag_order) {
    const std::size_t m = frame.width();
    if (m < 2) raise(errc::config_error, "Johansen needs at least 2 series");
    if (m > cv::kJohansenMaxDim) {
        raise(errc::config_error, "critical values embedded for up to 5 series");
    }
    if (lag_order < 1) raise(errc::config_error, "lag order must be at least 1");
    const std::size_t n = frame.length();
    if (n < m * static_cast<std::size_t>(lag_order) + 8) {
        raise(errc::too_short, "Johansen needs at least columns*lag_order + 8 observations");
    }

    // data matrix in deterministic (name) column order
    const auto names = frame.names();
    const int ni = static_cast<int>(n);
    const int mi = static_cast<int>(m);
    Eigen::MatrixXd Y(ni, mi);
    for (int j = 0; j < mi; ++j) {
        const auto vals = frame.col(names[static_cast<std::size_t>(j)]).values();
        for (int t = 0; t < ni; ++t) Y(t, j) = vals[static_cast<std::size_t>(t)];
    }

    const int k = lag_order;
    const int rows = ni - k;
    // Z0: differences; Z1: lagged levels; Z2: lagged differences + constant
    Eigen::MatrixXd Z0(rows, mi), Z1(rows, mi);
    const int z2_cols = mi * (k - 1) + 1;
    Eigen::MatrixXd Z2(rows, z2_cols);
    for (int t = k; t < ni; ++t) {
        const int r = t - k;
        for (int j = 0; j < mi; ++j) {
            Z0(r, j) = Y(t, j) - Y(t - 1, j);
            Z1(r, j) = Y(t - 1, j);
        }
        for (int lag = 1; lag <= k - 1; ++lag) {
            for (int j = 0; j < mi; ++j) {
                Z2(r, (lag - 1) * mi + j) = Y(t - lag, j) - Y(t - lag - 1, j);
            }
        }
        Z2(r, z2_cols - 1) = 1.0;
    }

    // partial out Z2 from Z0 and Z1
    auto residualize = [&](const Eigen::MatrixXd& Z) {
        Eigen::MatrixXd beta =
            (Z2.transpose() * Z2).ldlt().solve(Z2.transpose() * Z);
        return Eigen::MatrixXd(Z - Z2 * beta);
    };
    const Eigen::MatrixXd R0 = residualize(Z0);
    const Eigen::MatrixXd R1 = residualize(Z1);

    const double nr = static_cast<double>(rows);
    const Eigen::MatrixXd S00 = R0.transpose() * R0 / nr;
    const Eigen::MatrixXd S11 = R1.transpose() * R1 / nr;
    const Eigen::MatrixXd S01 = R0.transpose() * R1 / nr;

    Eigen::LLT<Eigen::MatrixXd> llt_s11(S11);
    Eigen::LLT<Eigen::MatrixXd> llt_s00(S00);
    if (llt_s11.info() != Eigen::Success || llt_s00.info() != Eigen::Success) {
        raise(errc::singular_moment, "product-moment matrix is not positive definite");
    }
    // relative conditioning guard: exact collinearity survives LLT on some
    // platforms, so check the smallest eigenvalue against the largest
    auto min_rel_eig = [](const Eigen::MatrixXd& S) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        const double top = es.eigenvalues().cwiseAbs().maxCoeff();
        return top > 0.0 ? es.eigenvalues().minCoeff() / top : 0.0;
    };
    if (min_rel_eig(S11) < 1e-12 || min_rel_eig(S00) < 1e-12) {
        raise(errc::singular_moment, "product-moment matrix is numerically singular");
    }

    const Eigen::MatrixXd S00_inv =
        llt_s00.solve(Eigen::MatrixXd::Identity(mi, mi));
    const Eigen::MatrixXd L = llt_s11.matrixL();
    const Eigen::MatrixXd inner = S01.transpose() * S00_inv * S01;  // S10 S00^-1 S01
    const Eigen::MatrixXd M =
        L.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd(L.triangularView<Eigen::Lower>()
                                .solve(inner)
                                .transpose()))
            .transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    if (es.info() != Eigen::Success) raise(errc::singular_moment, "eigen decomposition failed");

    std::vector<double> eigenvalues(es.eigenvalues().data(),
                                    es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
    for (auto& lambda : eigenvalues) lambda = std::clamp(lambda, 0.0, 1.0 - 1e-12);

    JohansenReport report;
    report.lag_order = lag_order;
    report.eigenvalues = eigenvalues;
    report.effective_n = static_cast<std::size_t>(rows);
    const double scale = static_cast<double>(ni - lag_order);
    int rank = 0;
    bool chain = true;
    for (int i = 0; i < mi; ++i) {
        const double stat = -scale * std::log1p(-eigenvalues[static_cast<std::size_t>(i)]);
        const double cv5 = cv::kJohansenMaxEigen[static_cast<std::size_t>(mi - i - 1)][1];
        report.max_eigen_statistics.push_back(stat);
        report.critical_values_5pct.push_back(cv5);
        if (chain && stat > cv5) {
            ++rank;
        } else {
            chain = false;
        }
    }
    report.cointegration_rank = rank;
    return report;
}

StationarityVerdict stationarity_verdict(const std::vector<TestReport>& reports,
                                         const AnnualSeries* series) {
    if (reports.size() < 2) raise(errc::config_error, "verdict needs at least 2 test reports");
    StationarityVerdict verdict;
    verdict.per_test = reports;

    bool all_stationary = true;
    bool all_nonstationary = true;
    for (const auto& rep : reports) {
        // a rejected unit-root null says stationary; a rejected stationarity
        // null (KPSS) says non-stationary
        const bool says_stationary = rep.null_hypothesis == "stationarity"
                                         ? !rep.reject_at_5pct
                                         : rep.reject_at_5pct;
        all_stationary = all_stationary && says_stationary;
        all_nonstationary = all_nonstationary && !says_stationary;
    }
    verdict.concordant = all_stationary || all_nonstationary;
    verdict.stationary = all_stationary;

    if (verdict.concordant && verdict.stationary) {
        verdict.recommended_transforms = {"level"};
        return verdict;
    }
    verdict.recommended_transforms = {"diff1", "HP"};
    if (series != nullptr && series->size() >= 2) {
        bool positive = true;
        for (std::size_t t = 0; t < series->size(); ++t) positive = positive && (*series)[t] > 0.0;
        if (positive) {
            const auto growth = growth_rates(*series);
            double mean = 0.0;
            for (std::size_t t = 0; t < growth.size(); ++t) mean += growth[t];
            mean /= static_cast<double>(growth.size());
            double var = 0.0;
            for (std::size_t t = 0; t < growth.size(); ++t) {
                var += (growth[t] - mean) * (growth[t] - mean);
            }
            var /= static_cast<double>(growth.size());
            // steady compounding: growth dominated by its level, not its noise
            if (std::fabs(mean) > std::sqrt(var)) {
                verdict.recommended_transforms.push_back("log");
            }
        }
    }
    return verdict;
}

}  // namespace fiscast
