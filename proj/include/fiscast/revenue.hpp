#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiscast/estimation.hpp"
#include "fiscast/metrics.hpp"
#include "fiscast/series.hpp"
#include "fiscast/stat_tests.hpp"

namespace fiscast {

enum class TaxKind { PIT, KD_DDD, DZP };

[[nodiscard]] const char* tax_name(TaxKind tax) noexcept;

/// One tax pipeline's configuration: which columns feed the regression, how
/// the holdout is cut and which error order / transform to use (auto when
/// unset).
struct TaxModelSpec {
    TaxKind tax = TaxKind::PIT;
    std::string target_column;
    std::vector<std::string> predictor_columns;
    std::optional<TransformTag> forced_transform;  // unset: try all candidates
    std::optional<ArimaOrder> fixed_order;         // unset: AICc grid
    int holdout_years = 3;
    double hp_lambda = 100.0;
    int johansen_lag_order = 2;
};

/// One fitted transform variant, its holdout forecast and at-level errors.
struct VariantResult {
    TransformTag transform = TransformTag::level;
    RegArimaModel model;
    AnnualSeries forecast;  // at level, over the holdout years
    ErrorTable errors;      // vs the held-out actuals, at level
};

struct PipelineResult {
    TaxModelSpec spec;
    std::vector<VariantResult> variants;  // successfully fitted candidates
    std::map<std::string, std::string> skipped;  // transform -> reason
    std::size_t selected = 0;             // index into variants
    StationarityVerdict target_verdict;
    std::optional<JohansenReport> johansen;
    std::vector<std::string> notes;       // provenance: lambda, orders, rules

    [[nodiscard]] const VariantResult& best() const { return variants[selected]; }
};

/// Profit identities of the corporate pipeline.
[[nodiscard]] AnnualSeries insurer_profit(const AnnualSeries& turnover,
                                          const AnnualSeries& claims,
                                          const AnnualSeries& purchases);

[[nodiscard]] AnnualSeries financial_profit(const AnnualSeries& insurance,
                                            const AnnualSeries& investment,
                                            const AnnualSeries& pension);

enum class ExpenseVariant { RXP, SXP };

[[nodiscard]] AnnualSeries nonfinancial_profit(const AnnualSeries& turnover,
                                               const AnnualSeries& expenses,
                                               const AnnualSeries& purchases,
                                               ExpenseVariant variant);

/// Full proposed-model pipeline: split, diagnose, fit every candidate
/// transform, forecast the holdout and evaluate at level. Candidates are
/// level (only when Johansen finds cointegration), diff1, HP, and log (DZP
/// only). Selection across transforms is by holdout RMSE at level; the error
/// order within a transform is the AICc grid choice.
[[nodiscard]] PipelineResult run_proposed_pipeline(const TaxModelSpec& spec,
                                                   const SeriesFrame& frame);

/// DZP convenience wrapper: simple regression of the target on one predictor
/// under the log and diff1 variants, zero-order errors.
[[nodiscard]] PipelineResult run_dzp_pipeline(const SeriesFrame& frame,
                                              const std::string& target = "DZP",
                                              const std::string& predictor = "PRM",
                                              int holdout_years = 3);

enum class BaselineTax { PIT, CIT };

/// The elasticity-baseline emulator. Elasticities are user-supplied; the
/// official ones were never published.
struct ElasticityBaselineSpec {
    BaselineTax tax = BaselineTax::PIT;
    std::string revenue_column;  // PIT revenues, or the KD component for CIT
    std::vector<std::string> predictor_columns;
    std::map<std::string, double> elasticities;
    // CIT composition: DDD forecast by AR(1), DZP carried forward flat
    std::string ddd_column;
    std::string dzp_column;
};

/// Growth-rate recursion R_{t+1} = R_t (1 + sum_X eta_X g_{X,t+1}) over the
/// last `horizon` years of the frame, anchored at the revenue level just
/// before the window. For CIT the result is KD + DDD + DZP.
[[nodiscard]] AnnualSeries run_baseline_elasticity(const ElasticityBaselineSpec& spec,
                                                   const SeriesFrame& frame, int horizon);

/// Side-by-side evaluation of a baseline forecast and the pipeline's selected
/// model on the common holdout, with accuracy-gain and relative-efficiency
/// rows. The estimation table mirrors the per-variant criteria.
struct ReproductionReport {
    std::string tax_label;

    struct VariantRow {
        std::string transform;
        ArimaOrder order;
        double loglik = 0.0;
        double aic = 0.0;
        double aicc = 0.0;
        double bic = 0.0;
        double r2 = 0.0;
        bool selected = false;
    };
    std::vector<VariantRow> estimation_table;

    ErrorTable baseline_errors;
    ErrorTable proposed_errors;
    ErrorTable gains;
    double relative_efficiency_pct = 0.0;
    bool baseline_consistent = true;  // |ME| <= MAE <= RMSE, U1 in [0,1]
    bool proposed_consistent = true;

    AnnualSeries actual_holdout;
    AnnualSeries baseline_holdout;
    AnnualSeries proposed_holdout;

    std::vector<std::string> provenance;
};

[[nodiscard]] ReproductionReport compare_models(const SeriesFrame& frame,
                                                const AnnualSeries& ministry_forecasts,
                                                const PipelineResult& proposed);

}  // namespace fiscast
