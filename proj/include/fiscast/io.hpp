#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiscast/revenue.hpp"
#include "fiscast/series.hpp"

namespace fiscast {

/// One run's configuration, loaded from a JSON file. Unknown keys are
/// rejected; a seed is mandatory so every report is reproducible.
struct RunConfig {
    std::string data_path;
    std::string tax = "PIT";  // PIT | KD_DDD | DZP
    std::string target_column;
    std::vector<std::string> predictor_columns;
    int holdout_years = 3;
    double hp_lambda = 100.0;
    std::string arima_policy = "auto";  // "auto" or "fixed"
    ArimaOrder fixed_order;             // used when policy == "fixed"
    double significance_level = 0.01;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string ministry_column;                 // required by compare
    std::map<std::string, double> elasticities;  // optional baseline emulator input
    int max_lags = 2;                            // diagnostics lag cap
};

[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Applies CLI overrides onto a loaded config.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> hp_lambda;
    std::optional<int> holdout_years;
};
void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

/// Short stable fingerprint of the effective configuration (FNV-1a of the
/// canonical JSON), embedded in every report.
[[nodiscard]] std::string config_fingerprint(const RunConfig& config);

/// Long-format CSV ingestion: header `year,series,value`, 4-digit years,
/// decimal-point values. Each series must be gap-free; the frame is the
/// common year intersection of all series.
[[nodiscard]] SeriesFrame ingest_csv(const std::filesystem::path& path);

/// A command's output: canonical JSON plus the aligned-text rendering.
struct Report {
    std::string json_text;
    std::string text;
    std::map<std::string, std::string> extra_files;  // filename -> contents
};

[[nodiscard]] Report cmd_diagnose(const RunConfig& config);
[[nodiscard]] Report cmd_screen(const RunConfig& config);
[[nodiscard]] Report cmd_fit(const RunConfig& config);
[[nodiscard]] Report cmd_forecast(const RunConfig& config);
[[nodiscard]] Report cmd_evaluate(const RunConfig& config);
[[nodiscard]] Report cmd_compare(const RunConfig& config);

/// Writes report.json, report.txt and any extra files into the output dir.
void write_report(const Report& report, const std::filesystem::path& output_dir);

/// Exit code for an error category: 0 is success, 1 is usage, data and model
/// errors map to 10 + the error code's index (documented in the README).
[[nodiscard]] int exit_code_for(errc code) noexcept;

}  // namespace fiscast
