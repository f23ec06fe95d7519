#include "fiscast/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fiscast/association.hpp"
#include "fiscast/errors.hpp"
#include "fiscast/transforms.hpp"

namespace fiscast {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string fmt(double value, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

ordered_json series_json(const AnnualSeries& s) {
    ordered_json j;
    j["name"] = s.name();
    j["start_year"] = s.start_year();
    j["values"] = std::vector<double>(s.values().begin(), s.values().end());
    return j;
}

ordered_json error_table_json(const ErrorTable& t) {
    ordered_json j;
    j["label"] = t.label;
    j["me"] = t.me;
    j["mae"] = t.mae;
    j["smae"] = t.smae;
    j["rmse"] = t.rmse;
    j["theil_u1"] = t.theil_u1;
    j["n"] = t.n;
    return j;
}

std::string error_table_text(const std::vector<ErrorTable>& rows) {
    std::ostringstream out;
    out << pad("Error:", 20) << pad("ME", 10) << pad("MAE", 10) << pad("sMAE", 10)
        << pad("RMSE", 10) << "U_1\n";
    for (const auto& t : rows) {
        out << pad(t.label, 20) << pad(fmt(t.me), 10) << pad(fmt(t.mae), 10)
            << pad(fmt(t.smae), 10) << pad(fmt(t.rmse), 10) << fmt(t.theil_u1) << "\n";
    }
    return out.str();
}

ordered_json test_report_json(const TestReport& r) {
    ordered_json j;
    j["test"] = r.test_name;
    j["spec"] = det_spec_name(r.spec);
    j["lags"] = r.lags;
    j["statistic"] = r.statistic;
    j["critical_values"] = ordered_json{{"1%", r.critical_values.at("1%")},
                                        {"5%", r.critical_values.at("5%")},
                                        {"10%", r.critical_values.at("10%")}};
    j["reject_at_5pct"] = r.reject_at_5pct;
    j["null_hypothesis"] = r.null_hypothesis;
    j["p_band"] = r.p_band;
    j["small_sample_warning"] = r.small_sample_warning;
    j["effective_n"] = r.effective_n;
    return j;
}

ordered_json variant_table_json(const PipelineResult& result) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < result.variants.size(); ++i) {
        const auto& v = result.variants[i];
        ordered_json j;
        j["transform"] = transform_name(v.transform);
        j["order"] = {v.model.order.p, v.model.order.d, v.model.order.q};
        j["loglik"] = v.model.loglik;
        j["aic"] = v.model.aic;
        j["aicc"] = v.model.aicc;
        j["bic"] = v.model.bic;
        j["r2"] = v.model.r2;
        j["holdout_rmse"] = v.errors.rmse;
        j["selected"] = i == result.selected;
        rows.push_back(std::move(j));
    }
    return rows;
}

std::string variant_table_text(const PipelineResult& result) {
    std::ostringstream out;
    out << pad("Variables", 12) << pad("log likelihood", 16) << pad("AIC", 10)
        << pad("AICc", 10) << pad("BIC", 10) << pad("R^2", 8) << "selected\n";
    for (std::size_t i = 0; i < result.variants.size(); ++i) {
        const auto& v = result.variants[i];
        out << pad(transform_name(v.transform), 12) << pad(fmt(v.model.loglik), 16)
            << pad(fmt(v.model.aic), 10) << pad(fmt(v.model.aicc), 10)
            << pad(fmt(v.model.bic), 10) << pad(fmt(v.model.r2), 8)
            << (i == result.selected ? "*" : "") << "\n";
    }
    return out.str();
}

ordered_json model_json(const RegArimaModel& m) {
    ordered_json j;
    j["target"] = m.target;
    j["transform"] = transform_name(m.transform);
    j["order"] = {m.order.p, m.order.d, m.order.q};
    ordered_json coeffs;
    for (const auto& [name, beta] : m.coefficients) coeffs[name] = beta;
    j["coefficients"] = std::move(coeffs);
    ordered_json ses;
    for (const auto& [name, se] : m.std_errors) ses[name] = se;
    j["std_errors"] = std::move(ses);
    j["intercept_included"] = m.intercept_included;
    if (m.intercept_included) j["intercept"] = m.intercept;
    j["ar_coeffs"] = m.ar_coeffs;
    j["ma_coeffs"] = m.ma_coeffs;
    j["innovation_variance"] = m.innovation_variance;
    j["loglik"] = m.loglik;
    j["aic"] = m.aic;
    j["aicc"] = m.aicc;
    j["bic"] = m.bic;
    j["r2"] = m.r2;
    j["n_effective"] = m.n_effective;
    j["method"] = m.method;
    return j;
}

// effective-config canonical form used for both the fingerprint and the
// report's config echo
ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["data"] = c.data_path;
    j["tax"] = c.tax;
    j["target"] = c.target_column;
    j["predictors"] = c.predictor_columns;
    j["holdout_years"] = c.holdout_years;
    j["hp_lambda"] = c.hp_lambda;
    j["arima_policy"] = c.arima_policy;
    if (c.arima_policy == "fixed") {
        j["fixed_order"] = {c.fixed_order.p, c.fixed_order.d, c.fixed_order.q};
    }
    j["significance_level"] = c.significance_level;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    if (!c.ministry_column.empty()) j["ministry_column"] = c.ministry_column;
    if (!c.elasticities.empty()) {
        ordered_json e;
        for (const auto& [name, eta] : c.elasticities) e[name] = eta;
        j["elasticities"] = std::move(e);
    }
    j["max_lags"] = c.max_lags;
    return j;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : data) {
        hash ^= ch;
        hash *= 1099511628211ull;
    }
    return hash;
}

TaxKind tax_from_string(const std::string& tax) {
    if (tax == "PIT") return TaxKind::PIT;
    if (tax == "KD_DDD") return TaxKind::KD_DDD;
    if (tax == "DZP") return TaxKind::DZP;
    raise(errc::config_error, "unknown tax '" + tax + "' (expected PIT, KD_DDD or DZP)");
}

TaxModelSpec spec_from_config(const RunConfig& config) {
    TaxModelSpec spec;
    spec.tax = tax_from_string(config.tax);
    spec.target_column = config.target_column;
    spec.predictor_columns = config.predictor_columns;
    spec.holdout_years = config.holdout_years;
    spec.hp_lambda = config.hp_lambda;
    if (config.arima_policy == "fixed") spec.fixed_order = config.fixed_order;
    return spec;
}

PipelineResult run_pipeline(const RunConfig& config, const SeriesFrame& frame) {
    const auto spec = spec_from_config(config);
    if (spec.tax == TaxKind::DZP && config.arima_policy == "auto") {
        return run_dzp_pipeline(frame, spec.target_column, spec.predictor_columns.at(0),
                                spec.holdout_years);
    }
    return run_proposed_pipeline(spec, frame);
}

Report finish_report(const std::string& command, const RunConfig& config,
                     ordered_json results, std::string text) {
    ordered_json j;
    j["command"] = command;
    j["fingerprint"] = config_fingerprint(config);
    j["config"] = config_json(config);
    j["results"] = std::move(results);
    Report report;
    report.json_text = j.dump(2) + "\n";
    report.text = "fiscast " + command + " (config " + config_fingerprint(config) + ")\n\n" +
                  std::move(text);
    return report;
}

}  // namespace

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "cannot open config file " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        raise(errc::config_error, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) raise(errc::config_error, "config must be a JSON object");

    static const std::vector<std::string> known = {
        "data",        "tax",       "target",       "predictors", "holdout_years",
        "hp_lambda",   "arima",     "significance", "seed",       "output_dir",
        "ministry_column", "elasticities", "max_lags"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            raise(errc::config_error, "unknown config key '" + key + "'");
        }
    }

    RunConfig c;
    try {
        if (!j.contains("data")) raise(errc::config_error, "config needs 'data'");
        c.data_path = j.at("data").get<std::string>();
        if (!j.contains("seed")) raise(errc::config_error, "config needs an explicit 'seed'");
        c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tax")) c.tax = j.at("tax").get<std::string>();
        tax_from_string(c.tax);

        // per-tax defaults for the regression columns
        if (c.tax == "PIT") {
            c.target_column = "PIT";
            c.predictor_columns = {"WAGE", "SOC"};
        } else if (c.tax == "KD_DDD") {
            c.target_column = "KD_DDD";
            c.predictor_columns = {"PI_F", "PI_NF"};
        } else {
            c.target_column = "DZP";
            c.predictor_columns = {"PRM"};
        }
        if (j.contains("target")) c.target_column = j.at("target").get<std::string>();
        if (j.contains("predictors")) {
            c.predictor_columns = j.at("predictors").get<std::vector<std::string>>();
        }
        if (j.contains("holdout_years")) c.holdout_years = j.at("holdout_years").get<int>();
        if (j.contains("hp_lambda")) c.hp_lambda = j.at("hp_lambda").get<double>();
        if (j.contains("significance")) {
            c.significance_level = j.at("significance").get<double>();
        }
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("ministry_column")) {
            c.ministry_column = j.at("ministry_column").get<std::string>();
        }
        if (j.contains("max_lags")) c.max_lags = j.at("max_lags").get<int>();
        if (j.contains("elasticities")) {
            for (const auto& [name, eta] : j.at("elasticities").items()) {
                c.elasticities[name] = eta.get<double>();
            }
        }
        if (j.contains("arima")) {
            const auto& a = j.at("arima");
            c.arima_policy = a.at("policy").get<std::string>();
            if (c.arima_policy == "fixed") {
                c.fixed_order.p = a.at("p").get<int>();
                c.fixed_order.d = a.at("d").get<int>();
                c.fixed_order.q = a.at("q").get<int>();
            } else if (c.arima_policy != "auto") {
                raise(errc::config_error, "arima policy must be 'auto' or 'fixed'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        raise(errc::config_error, std::string("config field has the wrong type: ") + e.what());
    }

    if (c.holdout_years < 1 || c.holdout_years > 10) {
        raise(errc::config_error, "holdout_years must be in [1, 10]");
    }
    if (!(c.hp_lambda > 0.0) || !std::isfinite(c.hp_lambda)) {
        raise(errc::config_error, "hp_lambda must be positive and finite");
    }
    if (!(c.significance_level > 0.0) || c.significance_level > 0.5) {
        raise(errc::config_error, "significance must be in (0, 0.5]");
    }
    if (c.max_lags < 0 || c.max_lags > 12) {
        raise(errc::config_error, "max_lags must be in [0, 12]");
    }
    if (c.arima_policy == "fixed") {
        const auto& o = c.fixed_order;
        if (o.p < 0 || o.p > 4 || o.q < 0 || o.q > 4 || o.d < 0 || o.d > 2) {
            raise(errc::config_error, "fixed order out of range (p,q in [0,4], d in [0,2])");
        }
    }
    return c;
}

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides) {
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.hp_lambda) config.hp_lambda = *overrides.hp_lambda;
    if (overrides.holdout_years) config.holdout_years = *overrides.holdout_years;
}

std::string config_fingerprint(const RunConfig& config) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_json(config).dump())));
    return buf;
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

SeriesFrame ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "cannot open data file " + path.string());

    std::string line;
    if (!std::getline(in, line)) raise(errc::schema_error, "line 1: empty file");
    {
        const auto header = split_csv_line(line);
        if (header.size() != 3 || header[0] != "year" || header[1] != "series" ||
            header[2] != "value") {
            raise(errc::schema_error, "line 1: header must be 'year,series,value'");
        }
    }

    std::map<std::string, std::map<int, double>> table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            raise(errc::schema_error,
                  "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                      std::to_string(fields.size()));
        }
        int year = 0;
        try {
            std::size_t used = 0;
            year = std::stoi(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            raise(errc::schema_error,
                  "line " + std::to_string(line_no) + ": year '" + fields[0] +
                      "' is not an integer");
        }
        if (year < 1000 || year > 9999) {
            raise(errc::schema_error,
                  "line " + std::to_string(line_no) + ": year must have 4 digits");
        }
        if (fields[1].empty()) {
            raise(errc::schema_error, "line " + std::to_string(line_no) + ": empty series name");
        }
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            raise(errc::non_numeric,
                  "line " + std::to_string(line_no) + ": value '" + fields[2] +
                      "' is not a number");
        }
        if (!std::isfinite(value)) {
            raise(errc::non_numeric,
                  "line " + std::to_string(line_no) + ": value is not finite");
        }
        auto& column = table[fields[1]];
        if (!column.emplace(year, value).second) {
            raise(errc::schema_error,
                  "line " + std::to_string(line_no) + ": duplicate row for series '" +
                      fields[1] + "', year " + std::to_string(year));
        }
    }
    if (table.empty()) raise(errc::schema_error, "no data rows");

    std::vector<AnnualSeries> series_list;
    for (const auto& [name, column] : table) {
        const int first = column.begin()->first;
        const int last = column.rbegin()->first;
        std::vector<double> values;
        values.reserve(column.size());
        for (int year = first; year <= last; ++year) {
            const auto it = column.find(year);
            if (it == column.end()) {
                raise(errc::gap_error, "series '" + name + "' is missing year " +
                                           std::to_string(year));
            }
            values.push_back(it->second);
        }
        series_list.emplace_back(name, first, std::move(values));
    }
    return align(series_list);
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

Report cmd_diagnose(const RunConfig& config) {
    const auto frame = ingest_csv(config.data_path);
    ordered_json results;
    std::ostringstream text;

    ordered_json per_series = ordered_json::array();
    for (const auto& [name, series] : frame.columns()) {
        ordered_json entry;
        entry["series"] = name;
        ordered_json tests = ordered_json::array();
        std::vector<TestReport> reports;
        auto push = [&](auto&& fn) {
            try {
                reports.push_back(fn());
                tests.push_back(test_report_json(reports.back()));
            } catch (const Error& err) {
                tests.push_back(ordered_json{{"skipped", err.what()}});
            }
        };
        push([&] { return adf_test(series, config.max_lags, DetSpec::constant); });
        push([&] { return pp_test(series, DetSpec::constant); });
        push([&] { return kpss_test(series, DetSpec::constant); });
        push([&] { return dfgls_test(series, config.max_lags); });
        entry["tests"] = std::move(tests);

        if (reports.size() >= 2) {
            const auto verdict = stationarity_verdict(reports, &series);
            entry["concordant"] = verdict.concordant;
            entry["stationary"] = verdict.concordant && verdict.stationary;
            entry["recommended_transforms"] = verdict.recommended_transforms;
            text << name << ": " << (verdict.concordant ? "concordant" : "discordant");
            text << ", recommend [";
            for (std::size_t i = 0; i < verdict.recommended_transforms.size(); ++i) {
                text << (i ? ", " : "") << verdict.recommended_transforms[i];
            }
            text << "]\n";
        }
        try {
            entry["hp_endpoint_sensitivity"] = hp_endpoint_sensitivity(series, config.hp_lambda);
        } catch (const Error&) {
            // series too short for the diagnostic
        }
        per_series.push_back(std::move(entry));
    }
    results["series"] = std::move(per_series);

    if (frame.width() >= 2 && frame.width() <= 5) {
        int lag = 2;
        while (lag >= 1 && frame.length() < frame.width() * static_cast<std::size_t>(lag) + 8) {
            --lag;
        }
        if (lag >= 1) {
            try {
                const auto joh = johansen_max_eigen(frame, lag);
                ordered_json jj;
                jj["lag_order"] = joh.lag_order;
                jj["eigenvalues"] = joh.eigenvalues;
                jj["max_eigen_statistics"] = joh.max_eigen_statistics;
                jj["critical_values_5pct"] = joh.critical_values_5pct;
                jj["cointegration_rank"] = joh.cointegration_rank;
                jj["deterministic_case"] = joh.deterministic_case;
                results["johansen"] = std::move(jj);
                text << "johansen: rank " << joh.cointegration_rank << " (lag " << lag << ")\n";
            } catch (const Error& err) {
                results["johansen"] = ordered_json{{"skipped", err.what()}};
            }
        }
    }
    return finish_report("diagnose", config, std::move(results), text.str());
}

Report cmd_screen(const RunConfig& config) {
    const auto frame = ingest_csv(config.data_path);
    ScreenOptions options;
    options.significance_level = config.significance_level;
    const auto reports =
        predictor_screen(frame, config.target_column, config.predictor_columns, options);

    ordered_json rows = ordered_json::array();
    std::ostringstream text;
    text << pad("Predictor", 14) << pad("r", 9) << pad("tau", 9) << pad("rho", 9)
         << pad("t p", 11) << pad("MW p", 11) << "passes\n";
    for (const auto& rep : reports) {
        ordered_json j;
        j["predictor"] = rep.predictor;
        j["is_aggregate"] = rep.is_aggregate;
        j["r"] = rep.r;
        j["tau"] = rep.tau;
        j["rho"] = rep.rho;
        ordered_json tests;
        for (const auto& [name, t] : rep.tests) {
            tests[name] = ordered_json{
                {"statistic", t.statistic}, {"p_value", t.p_value}, {"exact", t.exact}};
        }
        j["tests"] = std::move(tests);
        j["passes"] = rep.passes;
        rows.push_back(std::move(j));
        text << pad(rep.predictor, 14) << pad(fmt(rep.r, 3), 9) << pad(fmt(rep.tau, 3), 9)
             << pad(fmt(rep.rho, 3), 9) << pad(fmt(rep.tests.at("t").p_value, 5), 11)
             << pad(fmt(rep.tests.at("mannwhitney").p_value, 5), 11)
             << (rep.passes ? "yes" : "no") << "\n";
    }
    ordered_json results;
    results["target"] = config.target_column;
    results["screen"] = std::move(rows);
    return finish_report("screen", config, std::move(results), text.str());
}

Report cmd_fit(const RunConfig& config) {
    const auto frame = ingest_csv(config.data_path);
    const auto pipeline = run_pipeline(config, frame);

    ordered_json results;
    results["tax"] = config.tax;
    results["variants"] = variant_table_json(pipeline);
    results["selected_model"] = model_json(pipeline.best().model);
    ordered_json skipped = ordered_json::object();
    for (const auto& [k, v] : pipeline.skipped) skipped[k] = v;
    results["skipped"] = std::move(skipped);
    results["notes"] = pipeline.notes;

    std::string text = "Estimations of the proposed " + config.tax + " models\n" +
                       variant_table_text(pipeline);
    return finish_report("fit", config, std::move(results), std::move(text));
}

Report cmd_forecast(const RunConfig& config) {
    const auto frame = ingest_csv(config.data_path);
    const auto pipeline = run_pipeline(config, frame);
    const auto& best = pipeline.best();

    ordered_json results;
    results["tax"] = config.tax;
    results["transform"] = transform_name(best.transform);
    results["forecast"] = series_json(best.forecast);
    results["notes"] = pipeline.notes;

    std::ostringstream text;
    text << "At-level forecast, " << transform_name(best.transform) << " variant\n";
    text << pad("year", 8) << "forecast\n";
    for (std::size_t i = 0; i < best.forecast.size(); ++i) {
        text << pad(std::to_string(best.forecast.start_year() + static_cast<int>(i)), 8)
             << fmt(best.forecast[i]) << "\n";
    }
    return finish_report("forecast", config, std::move(results), text.str());
}

Report cmd_evaluate(const RunConfig& config) {
    const auto frame = ingest_csv(config.data_path);
    const auto pipeline = run_pipeline(config, frame);

    ordered_json results;
    results["tax"] = config.tax;
    results["variants"] = variant_table_json(pipeline);
    ordered_json per_variant = ordered_json::array();
    std::vector<ErrorTable> rows;
    for (const auto& v : pipeline.variants) {
        auto j = error_table_json(v.errors);
        j["consistent"] = error_table_consistent(v.errors);
        per_variant.push_back(std::move(j));
        rows.push_back(v.errors);
    }
    results["errors"] = std::move(per_variant);
    results["selected"] = error_table_json(pipeline.best().errors);
    results["notes"] = pipeline.notes;

    std::string text = "Forecasting errors per variant (at level)\n" + error_table_text(rows);
    return finish_report("evaluate", config, std::move(results), std::move(text));
}

Report cmd_compare(const RunConfig& config) {
    const auto frame = ingest_csv(config.data_path);
    const auto pipeline = run_pipeline(config, frame);

    AnnualSeries baseline;
    std::string baseline_source;
    if (!config.ministry_column.empty()) {
        baseline = frame.col(config.ministry_column);
        baseline_source = "ministry column '" + config.ministry_column + "'";
    } else if (!config.elasticities.empty()) {
        ElasticityBaselineSpec spec;
        spec.tax = BaselineTax::PIT;
        spec.revenue_column = config.target_column;
        for (const auto& [name, _] : config.elasticities) spec.predictor_columns.push_back(name);
        spec.elasticities = config.elasticities;
        baseline = run_baseline_elasticity(spec, frame, config.holdout_years);
        baseline_source = "elasticity emulator (user-supplied elasticities)";
    } else {
        raise(errc::config_error,
              "compare needs a 'ministry_column' or 'elasticities' in the config");
    }

    auto report = compare_models(frame, baseline, pipeline);
    report.provenance.push_back("baseline: " + baseline_source);

    ordered_json results;
    results["tax"] = report.tax_label;
    results["estimation_table"] = variant_table_json(pipeline);
    results["baseline_errors"] = error_table_json(report.baseline_errors);
    results["proposed_errors"] = error_table_json(report.proposed_errors);
    results["accuracy_gain"] = error_table_json(report.gains);
    results["relative_efficiency_pct"] = report.relative_efficiency_pct;
    results["baseline_consistent"] = report.baseline_consistent;
    results["proposed_consistent"] = report.proposed_consistent;
    results["actual"] = series_json(report.actual_holdout);
    results["baseline"] = series_json(report.baseline_holdout);
    results["proposed"] = series_json(report.proposed_holdout);
    results["provenance"] = report.provenance;

    std::ostringstream text;
    text << "Estimations of the proposed " << config.tax << " models\n"
         << variant_table_text(pipeline) << "\n"
         << "Forecasting errors for the current and proposed models\n"
         << error_table_text({report.baseline_errors, report.proposed_errors, report.gains})
         << "\nRelative efficiency gain (U_1): " << fmt(report.relative_efficiency_pct, 1)
         << "%\n";
    if (!report.baseline_consistent || !report.proposed_consistent) {
        text << "WARNING: an error row violates |ME| <= MAE <= RMSE or U_1 in [0,1]\n";
    }

    // plot data: year, actual, baseline, proposed over the holdout
    std::ostringstream csv;
    csv << "year,actual,baseline,proposed\n";
    csv.precision(12);
    for (std::size_t i = 0; i < report.actual_holdout.size(); ++i) {
        csv << report.actual_holdout.start_year() + static_cast<int>(i) << ","
            << report.actual_holdout[i] << "," << report.baseline_holdout[i] << ","
            << report.proposed_holdout[i] << "\n";
    }

    auto rep = finish_report("compare", config, std::move(results), text.str());
    rep.extra_files["plotdata_" + config.tax + ".csv"] = csv.str();
    return rep;
}

void write_report(const Report& report, const std::filesystem::path& output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) raise(errc::io_error, "cannot create output directory " + output_dir.string());
    auto write_file = [&](const std::string& name, const std::string& contents) {
        std::ofstream out(output_dir / name, std::ios::binary);
        if (!out) raise(errc::io_error, "cannot write " + (output_dir / name).string());
        out << contents;
    };
    write_file("report.json", report.json_text);
    write_file("report.txt", report.text);
    for (const auto& [name, contents] : report.extra_files) write_file(name, contents);
}

int exit_code_for(errc code) noexcept { return 10 + static_cast<int>(code); }

}  // namespace fiscast
