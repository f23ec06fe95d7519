#include "fiscast/series.hpp"

#include <algorithm>
#include <cmath>

namespace fiscast {

const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::empty_intersection: return "EmptyIntersection";
        case errc::duplicate_name: return "DuplicateName";
        case errc::holdout_too_large: return "HoldoutTooLarge";
        case errc::zero_denominator: return "ZeroDenominator";
        case errc::too_short: return "TooShort";
        case errc::missing_anchor: return "MissingAnchor";
        case errc::non_positive_value: return "NonPositiveValue";
        case errc::non_convergence: return "NonConvergence";
        case errc::singular_regression: return "SingularRegression";
        case errc::singular_moment: return "SingularMoment";
        case errc::zero_variance: return "ZeroVariance";
        case errc::all_tied: return "AllTied";
        case errc::all_zero_differences: return "AllZeroDifferences";
        case errc::sparse_cells: return "SparseCells";
        case errc::rank_deficient: return "RankDeficient";
        case errc::too_few_observations: return "TooFewObservations";
        case errc::non_invertible: return "NonInvertible";
        case errc::missing_predictor_years: return "MissingPredictorYears";
        case errc::aicc_undefined: return "AiccUndefined";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::both_zero: return "BothZero";
        case errc::both_zero_series: return "BothZeroSeries";
        case errc::sample_mismatch: return "SampleMismatch";
        case errc::zero_baseline: return "ZeroBaseline";
        case errc::missing_elasticity: return "MissingElasticity";
        case errc::year_mismatch: return "YearMismatch";
        case errc::no_viable_variant: return "NoViableVariant";
        case errc::schema_error: return "SchemaError";
        case errc::gap_error: return "GapError";
        case errc::non_numeric: return "NonNumeric";
        case errc::config_error: return "ConfigError";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

AnnualSeries::AnnualSeries(std::string name, int start_year, std::vector<double> values)
    : name_(std::move(name)), start_year_(start_year), values_(std::move(values)) {
    if (name_.empty()) raise(errc::schema_error, "series name must be non-empty");
    if (values_.empty()) raise(errc::too_short, "series '" + name_ + "' has no observations");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            raise(errc::non_numeric, "series '" + name_ + "' has a non-finite value in year " +
                                         std::to_string(start_year_ + static_cast<int>(i)));
        }
    }
}

double AnnualSeries::at_year(int year) const {
    if (!covers_year(year)) {
        raise(errc::year_mismatch, "series '" + name_ + "' does not cover year " +
                                       std::to_string(year));
    }
    return values_[static_cast<std::size_t>(year - start_year_)];
}

AnnualSeries AnnualSeries::renamed(std::string new_name) const {
    return AnnualSeries(std::move(new_name), start_year_, values_);
}

AnnualSeries AnnualSeries::slice_years(int first_year, int last_year) const {
    if (first_year > last_year || !covers_year(first_year) || !covers_year(last_year)) {
        raise(errc::year_mismatch, "slice [" + std::to_string(first_year) + ", " +
                                       std::to_string(last_year) + "] not covered by '" + name_ +
                                       "'");
    }
    auto begin = values_.begin() + (first_year - start_year_);
    auto end = values_.begin() + (last_year - start_year_ + 1);
    return AnnualSeries(name_, first_year, std::vector<double>(begin, end));
}

SeriesFrame::SeriesFrame(std::vector<AnnualSeries> columns) : first_year_(0), last_year_(0) {
    if (columns.empty()) raise(errc::schema_error, "frame requires at least one column");
    first_year_ = columns.front().start_year();
    last_year_ = columns.front().end_year();
    for (auto& s : columns) {
        if (s.start_year() != first_year_ || s.end_year() != last_year_) {
            raise(errc::year_mismatch,
                  "column '" + s.name() + "' does not cover the frame's year range");
        }
        auto name = s.name();
        if (!columns_.emplace(name, std::move(s)).second) {
            raise(errc::duplicate_name, "duplicate series name '" + name + "'");
        }
    }
}

const AnnualSeries& SeriesFrame::col(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) raise(errc::schema_error, "no column named '" + name + "'");
    return it->second;
}

std::vector<std::string> SeriesFrame::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& [name, _] : columns_) out.push_back(name);
    return out;
}

SeriesFrame align(const std::vector<AnnualSeries>& series_list) {
    if (series_list.empty()) raise(errc::schema_error, "align requires at least one series");
    int first = series_list.front().start_year();
    int last = series_list.front().end_year();
    for (const auto& s : series_list) {
        first = std::max(first, s.start_year());
        last = std::min(last, s.end_year());
    }
    if (first > last) raise(errc::empty_intersection, "series share no common year");
    std::vector<AnnualSeries> trimmed;
    trimmed.reserve(series_list.size());
    for (const auto& s : series_list) trimmed.push_back(s.slice_years(first, last));
    return SeriesFrame(std::move(trimmed));
}

std::pair<SeriesFrame, SeriesFrame> slice_train_test(const SeriesFrame& frame,
                                                     int holdout_years) {
    if (holdout_years <= 0) raise(errc::holdout_too_large, "holdout_years must be positive");
    if (static_cast<std::size_t>(holdout_years) >= frame.length()) {
        raise(errc::holdout_too_large,
              "holdout of " + std::to_string(holdout_years) + " years >= frame length " +
                  std::to_string(frame.length()));
    }
    int split = frame.last_year() - holdout_years;  // last train year
    std::vector<AnnualSeries> train_cols, test_cols;
    for (const auto& [_, s] : frame.columns()) {
        train_cols.push_back(s.slice_years(frame.first_year(), split));
        test_cols.push_back(s.slice_years(split + 1, frame.last_year()));
    }
    return {SeriesFrame(std::move(train_cols)), SeriesFrame(std::move(test_cols))};
}

AnnualSeries growth_rates(const AnnualSeries& series) {
    if (series.size() < 2) raise(errc::too_short, "growth rates need at least 2 observations");
    std::vector<double> out;
    out.reserve(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) {
        double prev = series[t - 1];
        if (prev == 0.0) {
            raise(errc::zero_denominator,
                  "zero value in year " +
                      std::to_string(series.start_year() + static_cast<int>(t) - 1));
        }
        out.push_back((series[t] - prev) / prev);
    }
    return AnnualSeries(series.name() + "_growth", series.start_year() + 1, std::move(out));
}

}  // namespace fiscast
