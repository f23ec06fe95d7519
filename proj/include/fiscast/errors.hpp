#pragma once

#include <stdexcept>
#include <string>

namespace fiscast {

/// Machine-readable failure categories. Every throwing operation in the
/// library raises an Error carrying exactly one of these codes; the CLI maps
/// them onto documented exit codes.
enum class errc {
    // series-core
    empty_intersection,
    duplicate_name,
    holdout_too_large,
    zero_denominator,
    // transforms
    too_short,
    missing_anchor,
    non_positive_value,
    non_convergence,
    // stat-tests
    singular_regression,
    singular_moment,
    // association
    zero_variance,
    all_tied,
    all_zero_differences,
    sparse_cells,
    // estimation
    rank_deficient,
    too_few_observations,
    non_invertible,
    missing_predictor_years,
    aicc_undefined,
    // forecast-eval
    length_mismatch,
    both_zero,
    both_zero_series,
    sample_mismatch,
    zero_baseline,
    // revenue-models
    missing_elasticity,
    year_mismatch,
    no_viable_variant,
    // cli-reporting
    schema_error,
    gap_error,
    non_numeric,
    config_error,
    io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace fiscast
