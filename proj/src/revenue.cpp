#include "fiscast/revenue.hpp"

#include <algorithm>
#include <cmath>

#include "fiscast/errors.hpp"
#include "fiscast/transforms.hpp"

namespace fiscast {

namespace {

void require_same_range(const AnnualSeries& a, const AnnualSeries& b) {
    if (a.start_year() != b.start_year() || a.size() != b.size()) {
        raise(errc::length_mismatch,
              "'" + a.name() + "' and '" + b.name() + "' cover different years");
    }
}

AnnualSeries combine(const std::string& name, const AnnualSeries& base,
                     const std::vector<std::pair<const AnnualSeries*, double>>& terms) {
    std::vector<double> out(base.values().begin(), base.values().end());
    for (const auto& [series, weight] : terms) {
        require_same_range(base, *series);
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += weight * (*series)[t];
    }
    return AnnualSeries(name, base.start_year(), std::move(out));
}

}  // namespace

const char* tax_name(TaxKind tax) noexcept {
    switch (tax) {
        case TaxKind::PIT: return "PIT";
        case TaxKind::KD_DDD: return "KD+DDD";
        case TaxKind::DZP: return "DZP";
    }
    return "?";
}

AnnualSeries insurer_profit(const AnnualSeries& turnover, const AnnualSeries& claims,
                            const AnnualSeries& purchases) {
    return combine("PI_INSURANCE", turnover, {{&claims, -1.0}, {&purchases, -1.0}});
}

AnnualSeries financial_profit(const AnnualSeries& insurance, const AnnualSeries& investment,
                              const AnnualSeries& pension) {
    return combine("PI_F", insurance, {{&investment, 1.0}, {&pension, 1.0}});
}

AnnualSeries nonfinancial_profit(const AnnualSeries& turnover, const AnnualSeries& expenses,
                                 const AnnualSeries& purchases, ExpenseVariant variant) {
    const std::string name = variant == ExpenseVariant::RXP ? "PI_NF_RXP" : "PI_NF_SXP";
    return combine(name, turnover, {{&expenses, -1.0}, {&purchases, -1.0}});
}

PipelineResult run_proposed_pipeline(const TaxModelSpec& spec, const SeriesFrame& frame) {
    if (spec.target_column.empty() || spec.predictor_columns.empty()) {
        raise(errc::config_error, "pipeline needs a target and at least one predictor");
    }
    if (frame.length() < static_cast<std::size_t>(spec.holdout_years + 8)) {
        raise(errc::too_short, "pipeline needs holdout + 8 years of data");
    }

    // restrict to the columns in play
    std::vector<AnnualSeries> cols;
    cols.push_back(frame.col(spec.target_column));
    for (const auto& p : spec.predictor_columns) cols.push_back(frame.col(p));
    const SeriesFrame data(std::move(cols));

    PipelineResult result;
    result.spec = spec;

    auto [train, test] = slice_train_test(data, spec.holdout_years);
    const auto& target_train = train.col(spec.target_column);
    const auto& target_test = test.col(spec.target_column);

    // stationarity diagnostics on the target
    {
        std::vector<TestReport> reports;
        const int max_lags = target_train.size() >= 16 ? 2 : 0;
        reports.push_back(adf_test(target_train, max_lags, DetSpec::constant));
        try {
            reports.push_back(pp_test(target_train, DetSpec::constant));
        } catch (const Error&) {
            // PP needs 10 observations; skip on very short samples
        }
        reports.push_back(kpss_test(target_train, DetSpec::constant));
        result.target_verdict = stationarity_verdict(reports, &target_train);
    }

    // cointegration gate for the level candidate
    bool cointegrated = false;
    {
        int lag = spec.johansen_lag_order;
        while (lag >= 1 &&
               train.length() < train.width() * static_cast<std::size_t>(lag) + 8) {
            --lag;
        }
        if (lag >= 1) {
            try {
                result.johansen = johansen_max_eigen(train, lag);
                cointegrated = result.johansen->cointegration_rank >= 1;
                if (lag != spec.johansen_lag_order) {
                    result.notes.push_back("johansen lag order reduced to " +
                                           std::to_string(lag) + " by the sample size");
                }
            } catch (const Error& err) {
                result.skipped["level"] = std::string("johansen failed: ") + err.what();
            }
        } else {
            result.skipped["level"] = "sample too short for the Johansen test";
        }
    }

    std::vector<TransformTag> candidates;
    if (spec.forced_transform.has_value()) {
        candidates.push_back(*spec.forced_transform);
    } else {
        if (cointegrated) {
            candidates.push_back(TransformTag::level);
        } else if (!result.skipped.contains("level")) {
            result.skipped["level"] = "no cointegration at level";
        }
        candidates.push_back(TransformTag::diff1);
        candidates.push_back(TransformTag::hp);
        if (spec.tax == TaxKind::DZP) candidates.push_back(TransformTag::log);
    }

    RegArimaOptions options;
    options.hp_lambda = spec.hp_lambda;
    result.notes.push_back("hp_lambda=" + std::to_string(spec.hp_lambda));
    result.notes.push_back(
        "HP at-level forecasts add a linear continuation of the last trend increment");
    result.notes.push_back("selection across transforms: minimal holdout RMSE at level");

    for (const auto tag : candidates) {
        try {
            const int d = tag == TransformTag::diff1 ? 1 : 0;
            ArimaOrder order;
            if (spec.fixed_order.has_value()) {
                order = *spec.fixed_order;
                order.d = d;
            } else {
                // order search on the OLS residuals of this transform
                auto probe = fit_regarima(train, spec.target_column, spec.predictor_columns,
                                          ArimaOrder{0, d, 0}, tag, options);
                try {
                    order = auto_order(probe.residuals, 2, 2, d);
                } catch (const Error&) {
                    order = ArimaOrder{0, d, 0};  // sample too short for the grid
                }
            }
            VariantResult variant;
            variant.transform = tag;
            variant.model = fit_regarima(train, spec.target_column, spec.predictor_columns,
                                         order, tag, options);
            variant.forecast = forecast_regarima(variant.model, test, spec.holdout_years);
            variant.errors = evaluate(target_test, variant.forecast,
                                      std::string(transform_name(tag)) + " variant");
            result.variants.push_back(std::move(variant));
        } catch (const Error& err) {
            result.skipped[transform_name(tag)] = err.what();
        }
    }

    if (result.variants.empty()) {
        raise(errc::no_viable_variant, "every candidate transform failed for " +
                                           std::string(tax_name(spec.tax)));
    }
    result.selected = 0;
    for (std::size_t i = 1; i < result.variants.size(); ++i) {
        if (result.variants[i].errors.rmse < result.variants[result.selected].errors.rmse) {
            result.selected = i;
        }
    }
    result.notes.push_back(std::string("selected transform: ") +
                           transform_name(result.variants[result.selected].transform));
    const auto& chosen = result.variants[result.selected].model;
    result.notes.push_back("selected error order: ARIMA(" + std::to_string(chosen.order.p) +
                           "," + std::to_string(chosen.order.d) + "," +
                           std::to_string(chosen.order.q) + ")");
    result.notes.push_back("estimation: " + chosen.method);
    return result;
}

PipelineResult run_dzp_pipeline(const SeriesFrame& frame, const std::string& target,
                                const std::string& predictor, int holdout_years) {
    TaxModelSpec spec;
    spec.tax = TaxKind::DZP;
    spec.target_column = target;
    spec.predictor_columns = {predictor};
    spec.fixed_order = ArimaOrder{0, 0, 0};  // plain simple regression per variant
    spec.holdout_years = holdout_years;

    // only the log and diff1 variants are in play for DZP
    PipelineResult result;
    bool first = true;
    for (const auto tag : {TransformTag::log, TransformTag::diff1}) {
        TaxModelSpec one = spec;
        one.forced_transform = tag;
        try {
            auto partial = run_proposed_pipeline(one, frame);
            if (first) {
                result = partial;
                first = false;
            } else {
                result.variants.push_back(partial.variants.front());
                for (const auto& [k, v] : partial.skipped) result.skipped.emplace(k, v);
            }
        } catch (const Error& err) {
            result.skipped[transform_name(tag)] = err.what();
        }
    }
    if (result.variants.empty()) {
        raise(errc::no_viable_variant, "both DZP variants failed");
    }
    result.spec = spec;
    result.selected = 0;
    for (std::size_t i = 1; i < result.variants.size(); ++i) {
        if (result.variants[i].errors.rmse < result.variants[result.selected].errors.rmse) {
            result.selected = i;
        }
    }
    return result;
}

AnnualSeries run_baseline_elasticity(const ElasticityBaselineSpec& spec,
                                     const SeriesFrame& frame, int horizon) {
    if (horizon <= 0) raise(errc::config_error, "horizon must be positive");
    for (const auto& name : spec.predictor_columns) {
        if (!spec.elasticities.contains(name)) {
            raise(errc::missing_elasticity, "no elasticity supplied for '" + name + "'");
        }
        if (!frame.has(name)) raise(errc::schema_error, "predictor '" + name + "' not in data");
    }
    if (frame.length() < static_cast<std::size_t>(horizon + 2)) {
        raise(errc::too_short, "need at least horizon + 2 years of data");
    }

    const int base_year = frame.last_year() - horizon;
    const auto& revenue = frame.col(spec.revenue_column);
    if (!revenue.covers_year(base_year)) {
        raise(errc::year_mismatch, "revenue column does not reach the base year");
    }

    // growth-rate recursion over the forecast window
    std::vector<double> forecast(static_cast<std::size_t>(horizon));
    double level = revenue.at_year(base_year);
    for (int h = 1; h <= horizon; ++h) {
        const int year = base_year + h;
        double rate = 0.0;
        for (const auto& name : spec.predictor_columns) {
            const auto& series = frame.col(name);
            const double prev = series.at_year(year - 1);
            if (prev == 0.0) {
                raise(errc::zero_denominator,
                      "predictor '" + name + "' is zero in year " + std::to_string(year - 1));
            }
            const double growth = (series.at_year(year) - prev) / prev;
            rate += spec.elasticities.at(name) * growth;
        }
        level *= 1.0 + rate;
        forecast[static_cast<std::size_t>(h - 1)] = level;
    }

    if (spec.tax == BaselineTax::PIT) {
        return AnnualSeries("PIT_baseline", base_year + 1, std::move(forecast));
    }

    // CIT: the recursion produced the KD path; add DDD by AR(1) and DZP flat
    if (spec.ddd_column.empty() || spec.dzp_column.empty()) {
        raise(errc::config_error, "CIT baseline needs ddd and dzp columns");
    }
    const auto ddd_history =
        frame.col(spec.ddd_column).slice_years(frame.first_year(), base_year);
    const auto ddd_model = ar1_fit(ddd_history);
    const auto ddd_forecast = ar1_forecast(ddd_model, ddd_history, horizon);
    const double dzp_level = frame.col(spec.dzp_column).at_year(base_year);
    for (int h = 0; h < horizon; ++h) {
        forecast[static_cast<std::size_t>(h)] +=
            ddd_forecast[static_cast<std::size_t>(h)] + dzp_level;
    }
    return AnnualSeries("CIT_baseline", base_year + 1, std::move(forecast));
}

ReproductionReport compare_models(const SeriesFrame& frame,
                                  const AnnualSeries& ministry_forecasts,
                                  const PipelineResult& proposed) {
    const auto& best = proposed.best();
    const int first = best.forecast.start_year();
    const int last = best.forecast.end_year();

    const auto& target = frame.col(proposed.spec.target_column);
    if (!target.covers_year(first) || !target.covers_year(last) ||
        !ministry_forecasts.covers_year(first) || !ministry_forecasts.covers_year(last)) {
        raise(errc::year_mismatch,
              "actuals and ministry forecasts must cover the holdout years " +
                  std::to_string(first) + "-" + std::to_string(last));
    }

    ReproductionReport report;
    report.tax_label = tax_name(proposed.spec.tax);
    report.actual_holdout = target.slice_years(first, last);
    report.baseline_holdout = ministry_forecasts.slice_years(first, last);
    report.proposed_holdout = best.forecast;

    for (std::size_t i = 0; i < proposed.variants.size(); ++i) {
        const auto& v = proposed.variants[i];
        ReproductionReport::VariantRow row;
        row.transform = transform_name(v.transform);
        row.order = v.model.order;
        row.loglik = v.model.loglik;
        row.aic = v.model.aic;
        row.aicc = v.model.aicc;
        row.bic = v.model.bic;
        row.r2 = v.model.r2;
        row.selected = i == proposed.selected;
        report.estimation_table.push_back(row);
    }

    report.baseline_errors =
        evaluate(report.actual_holdout, report.baseline_holdout, "Actual forecasts");
    report.proposed_errors =
        evaluate(report.actual_holdout, report.proposed_holdout, "Proposed model");
    report.gains = accuracy_gain(report.baseline_errors, report.proposed_errors);
    if (report.baseline_errors.theil_u1 > 0.0) {
        report.relative_efficiency_pct = relative_efficiency_gain(
            report.baseline_errors.theil_u1, report.proposed_errors.theil_u1);
    } else {
        report.relative_efficiency_pct = 0.0;
        report.provenance.push_back("relative efficiency undefined: baseline U1 is zero");
    }
    report.baseline_consistent = error_table_consistent(report.baseline_errors);
    report.proposed_consistent = error_table_consistent(report.proposed_errors);
    report.provenance = proposed.notes;
    return report;
}

}  // namespace fiscast
