#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fiscast/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> hp_lambda;
    std::optional<int> holdout;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the JSON run configuration")
        ->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--lambda", args.hp_lambda, "override the HP smoothing parameter");
    cmd->add_option("--holdout", args.holdout, "override the holdout length in years");
    cmd->add_flag("--quiet", args.quiet, "suppress the text report on stdout");
}

int run(const std::string& command, const CommonArgs& args) {
    auto config = fiscast::load_config(args.config_path);
    fiscast::ConfigOverrides overrides;
    overrides.seed = args.seed;
    overrides.hp_lambda = args.hp_lambda;
    overrides.holdout_years = args.holdout;
    fiscast::apply_overrides(config, overrides);

    fiscast::Report report;
    if (command == "diagnose") report = fiscast::cmd_diagnose(config);
    if (command == "screen") report = fiscast::cmd_screen(config);
    if (command == "fit") report = fiscast::cmd_fit(config);
    if (command == "forecast") report = fiscast::cmd_forecast(config);
    if (command == "evaluate") report = fiscast::cmd_evaluate(config);
    if (command == "compare") report = fiscast::cmd_compare(config);

    fiscast::write_report(report, config.output_dir);
    if (!args.quiet) std::fputs(report.text.c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiscast - tax revenue forecasting models, diagnostics and scoring"};
    app.require_subcommand(1);

    const char* commands[] = {"diagnose", "screen", "fit", "forecast", "evaluate", "compare"};
    const char* descriptions[] = {
        "unit-root/stationarity/cointegration diagnostics per series",
        "predictor screening: correlations and significance tests",
        "fit every candidate transform and report the estimation table",
        "at-level holdout forecast from the selected model",
        "forecast-error tables for every fitted variant",
        "baseline vs proposed comparison with accuracy gains and plot data",
    };
    CommonArgs args;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        add_common(app.add_subcommand(commands[i], descriptions[i]), args);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, args);
    } catch (const fiscast::Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return fiscast::exit_code_for(err.code());
    } catch (const std::exception& err) {
        std::fprintf(stderr, "internal error: %s\n", err.what());
        return 70;
    }
}
