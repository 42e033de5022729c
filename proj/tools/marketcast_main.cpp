#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "marketcast/report.hpp"

namespace {

// Exit codes: 0 success, 1 partial failure (some row or cell failed),
// 2 configuration error.
constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

const std::vector<std::string> kDefaultAssets = {"BTC-USD", "FCHI",  "FTSE",
                                                 "GDAXI",   "N100", "SSMI"};

struct CliOptions {
    std::vector<std::string> data;
    std::vector<std::string> periods = {"full", "2018", "2019", "2020", "2021"};
    std::vector<std::string> models = {"arima", "ets-ann", "knn"};
    double ratio = 0.8;
    std::uint64_t seed = 0;
    std::string mode = "static";
    double risk_free = 0.0;
    std::string format = "csv";
    std::string out = ".";
    bool use_adj_close = false;
    bool align_calendars = false;
};

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("MARKETCAST_DATA_DIR")) {
        return env;
    }
    return "data";
}

// Entries look like "ASSET=path.csv" or bare "ASSET" (resolved against the
// data directory).
marketcast::RunConfig build_config(const CliOptions& options) {
    marketcast::RunConfig config;
    config.data.clear();
    std::vector<std::string> entries = options.data;
    if (entries.empty()) entries = kDefaultAssets;
    const std::filesystem::path data_dir = default_data_dir();
    for (const std::string& entry : entries) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            config.data.emplace_back(entry, data_dir / (entry + ".csv"));
        } else {
            config.data.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
        }
    }
    config.period_labels = options.periods;
    config.model_names = options.models;
    config.split_ratio = options.ratio;
    config.seed = options.seed;
    config.mode = marketcast::eval_mode_from_string(options.mode);
    config.risk_free = options.risk_free;
    config.format = options.format;
    config.out_dir = options.out;
    config.use_adj_close = options.use_adj_close;
    config.align_calendars = options.align_calendars;

    for (const auto& [asset, path] : config.data) {
        if (!std::filesystem::exists(path)) {
            throw CLI::ValidationError("--data", "no data file for " + asset + " at " + path.string());
        }
    }
    if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) {
        throw CLI::ValidationError("--ratio", "must lie in (0, 1)");
    }
    return config;
}

void add_common_flags(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--data", options.data,
                    "asset=path.csv (repeatable); bare asset names resolve against "
                    "$MARKETCAST_DATA_DIR or ./data");
    cmd->add_option("--periods", options.periods, "period labels (full, 2018, ..., 2021)")
        ->delimiter(',');
    cmd->add_option("--ratio", options.ratio, "train fraction of each period slice");
    cmd->add_option("--seed", options.seed, "global random seed");
    cmd->add_option("--rf", options.risk_free, "daily risk-free rate for the Sharpe ratio");
    cmd->add_option("--format", options.format, "output format: csv | json | md")
        ->check(CLI::IsMember({"csv", "json", "md"}));
    cmd->add_option("--out", options.out, "output directory");
    cmd->add_flag("--use-adj-close", options.use_adj_close, "prefer the Adj Close column");
    cmd->add_flag("--align-calendars", options.align_calendars,
                  "fit models on the cross-asset aligned calendar");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"marketcast - financial time-series forecasting benchmark"};
    app.require_subcommand(1);

    CliOptions options;
    CLI::App* describe = app.add_subcommand("describe", "per-(asset, period) return statistics");
    CLI::App* corr = app.add_subcommand("corr", "aligned return correlation matrix");
    CLI::App* adf = app.add_subcommand("adf", "unit-root tests per (asset, period)");
    CLI::App* benchmark = app.add_subcommand("benchmark", "full model x asset x period grid");
    CLI::App* export_plot =
        app.add_subcommand("export-plotdata", "per-asset dates, closes, and log returns");
    for (CLI::App* cmd : {describe, corr, adf, benchmark, export_plot}) {
        add_common_flags(cmd, options);
    }
    benchmark->add_option("--models", options.models, "models to run: arima, ets-ann, knn")
        ->delimiter(',');
    benchmark->add_option("--mode", options.mode, "static | rolling")
        ->check(CLI::IsMember({"static", "rolling"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const marketcast::RunConfig config = build_config(options);
        if (describe->parsed()) {
            const auto table = marketcast::cmd_describe(config);
            const auto path = marketcast::write_describe(table, config);
            std::cout << "wrote " << path.string() << "\n";
            return table.all_ok() ? kExitOk : kExitPartial;
        }
        if (corr->parsed()) {
            const auto table = marketcast::cmd_corr(config);
            const auto path = marketcast::write_corr(table, config);
            std::cout << "wrote " << path.string() << "\n";
            return kExitOk;
        }
        if (adf->parsed()) {
            const auto table = marketcast::cmd_adf(config);
            const auto path = marketcast::write_adf(table, config);
            std::cout << "wrote " << path.string() << "\n";
            return table.all_ok() ? kExitOk : kExitPartial;
        }
        if (benchmark->parsed()) {
            const auto artifacts = marketcast::cmd_benchmark(config);
            const auto paths = marketcast::write_benchmark(artifacts, config);
            for (const auto& path : paths) std::cout << "wrote " << path.string() << "\n";
            std::cout << "grid hash: " << marketcast::grid_hash(artifacts.grid) << "\n";
            return artifacts.grid.all_ok() ? kExitOk : kExitPartial;
        }
        if (export_plot->parsed()) {
            const auto paths = marketcast::cmd_export_plotdata(config);
            for (const auto& path : paths) std::cout << "wrote " << path.string() << "\n";
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    }
    return kExitConfig;
}
