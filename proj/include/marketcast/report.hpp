#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "marketcast/benchmark.hpp"
#include "marketcast/descriptive_stats.hpp"

namespace marketcast {

/// Everything a run needs; the manifest serializes this plus the library
/// version so any run can be reproduced bit-for-bit from its outputs.
struct RunConfig {
    std::vector<std::pair<std::string, std::filesystem::path>> data;  // asset id -> CSV path
    std::vector<std::string> period_labels = {"full", "2018", "2019", "2020", "2021"};
    std::vector<std::string> model_names = {"arima", "ets-ann", "knn"};
    double split_ratio = 0.8;
    std::uint64_t seed = 0;
    EvalMode mode = EvalMode::static_multi_step;
    double risk_free = 0.0;
    std::string format = "csv";  // csv | json | md
    std::filesystem::path out_dir = ".";
    bool use_adj_close = false;
    /// Fit models on the cross-asset aligned calendar instead of each asset's
    /// native calendar (the crypto series trades weekends, the indices do not).
    bool align_calendars = false;
};

struct DescribeRow {
    std::string asset_id;
    std::string period_label;
    bool ok = false;
    std::string error;
    DescriptiveReport report;
};

struct DescribeTable {
    std::vector<DescribeRow> rows;
    [[nodiscard]] bool all_ok() const;
};

struct CorrTable {
    std::vector<std::string> assets;
    std::vector<std::vector<double>> matrix;
    std::size_t aligned_days = 0;
};

struct AdfRow {
    std::string asset_id;
    std::string period_label;
    bool ok = false;
    std::string error;
    AdfResult result;
};

struct AdfTable {
    std::vector<AdfRow> rows;
    [[nodiscard]] bool all_ok() const;
};

struct BenchmarkArtifacts {
    BenchmarkGrid grid;
    nlohmann::json manifest;
};

/// One row per (asset, period) with the descriptive statistics of the
/// period's log returns; per-row failures are recorded, not thrown.
DescribeTable cmd_describe(const RunConfig& config);

/// Correlation of the aligned full-range log returns across all assets.
CorrTable cmd_corr(const RunConfig& config);

/// ADF unit-root test per (asset, period) on log returns.
AdfTable cmd_adf(const RunConfig& config);

/// Full benchmark grid plus a reproduction manifest.
BenchmarkArtifacts cmd_benchmark(const RunConfig& config);

/// Per-asset export of dates, closes, and log returns for external plotting.
/// Returns the written file paths.
std::vector<std::filesystem::path> cmd_export_plotdata(const RunConfig& config);

// ---- emission ------------------------------------------------------------

std::filesystem::path write_describe(const DescribeTable& table, const RunConfig& config);
std::filesystem::path write_corr(const CorrTable& table, const RunConfig& config);
std::filesystem::path write_adf(const AdfTable& table, const RunConfig& config);
/// Writes the grid, the pooled relative-MAE table, every fitted model record,
/// and the manifest; returns the written paths.
std::vector<std::filesystem::path> write_benchmark(const BenchmarkArtifacts& artifacts,
                                                   const RunConfig& config);

/// Renders the grid as CSV text (also the input of the manifest's grid hash).
std::string grid_to_csv(const BenchmarkGrid& grid);

/// FNV-1a hash of the grid's CSV rendering; stable across reruns.
std::uint64_t grid_hash(const BenchmarkGrid& grid);

/// Rebuilds the exact RunConfig recorded in a manifest.
RunConfig config_from_manifest(const nlohmann::json& manifest);

/// Loads every configured asset; throws on the first failure.
std::vector<PriceSeries> load_assets(const RunConfig& config);

}  // namespace marketcast
