#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fiscast/errors.hpp"

namespace fiscast {

/// A named, gap-free annual time series. Values are contiguous years starting
/// at start_year; every value is finite. Immutable after construction.
class AnnualSeries {
public:
    /// Empty placeholder so aggregates holding a series can be default
    /// constructed; every populated series goes through the validating
    /// constructor.
    AnnualSeries() : start_year_(0) {}

    /// Validates: non-empty name, length >= 1, all values finite.
    AnnualSeries(std::string name, int start_year, std::vector<double> values);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] int start_year() const noexcept { return start_year_; }
    [[nodiscard]] int end_year() const noexcept {
        return start_year_ + static_cast<int>(values_.size()) - 1;
    }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& vec() const noexcept { return values_; }

    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] bool covers_year(int year) const noexcept {
        return year >= start_year_ && year <= end_year();
    }
    /// Value at a calendar year; throws if the year is outside the range.
    [[nodiscard]] double at_year(int year) const;

    [[nodiscard]] AnnualSeries renamed(std::string new_name) const;
    /// Inclusive year slice; throws if [first, last] is not covered.
    [[nodiscard]] AnnualSeries slice_years(int first_year, int last_year) const;
    [[nodiscard]] double back() const noexcept { return values_.back(); }

private:
    std::string name_;
    int start_year_;
    std::vector<double> values_;
};

/// A set of AnnualSeries aligned to one common inclusive year range.
/// Columns are keyed by name; iteration order is lexicographic and therefore
/// deterministic.
class SeriesFrame {
public:
    /// Builds a frame from pre-aligned columns (all must share one range).
    explicit SeriesFrame(std::vector<AnnualSeries> columns);

    [[nodiscard]] int first_year() const noexcept { return first_year_; }
    [[nodiscard]] int last_year() const noexcept { return last_year_; }
    [[nodiscard]] std::size_t length() const noexcept {
        return static_cast<std::size_t>(last_year_ - first_year_ + 1);
    }
    [[nodiscard]] std::size_t width() const noexcept { return columns_.size(); }

    [[nodiscard]] bool has(const std::string& name) const { return columns_.contains(name); }
    /// Throws schema_error if absent.
    [[nodiscard]] const AnnualSeries& col(const std::string& name) const;
    [[nodiscard]] const std::map<std::string, AnnualSeries>& columns() const noexcept {
        return columns_;
    }
    [[nodiscard]] std::vector<std::string> names() const;

private:
    int first_year_;
    int last_year_;
    std::map<std::string, AnnualSeries> columns_;
};

/// Trims all series to their common year intersection.
/// Throws empty_intersection when no year is shared, duplicate_name when two
/// series share a name.
[[nodiscard]] SeriesFrame align(const std::vector<AnnualSeries>& series_list);

/// Splits a frame into (train, test) where test holds the final
/// holdout_years. Throws holdout_too_large when holdout_years >= length.
[[nodiscard]] std::pair<SeriesFrame, SeriesFrame> slice_train_test(const SeriesFrame& frame,
                                                                   int holdout_years);

/// Year-over-year relative changes: element t is (v_t - v_{t-1}) / v_{t-1}.
/// Output starts one year later and is one element shorter.
/// Throws zero_denominator naming the offending year.
[[nodiscard]] AnnualSeries growth_rates(const AnnualSeries& series);

}  // namespace fiscast
