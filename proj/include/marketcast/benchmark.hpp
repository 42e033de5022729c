#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "marketcast/arima.hpp"
#include "marketcast/ets.hpp"
#include "marketcast/hybrid.hpp"
#include "marketcast/knn.hpp"
#include "marketcast/market_data.hpp"
#include "marketcast/metrics.hpp"
#include "marketcast/residual_net.hpp"

namespace marketcast {

enum class ModelKind { arima, ets_ann, knn };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

enum class EvalMode { static_multi_step, rolling_one_step };

std::string to_string(EvalMode mode);
EvalMode eval_mode_from_string(const std::string& name);

/// A trained forecaster behind one h-step forecast contract.
using FittedModel = std::variant<ArimaModel, EtsModel, KnnModel, HybridModel>;

/// Uniform static multi-step forecast over the model family.
std::vector<double> forecast_model(const FittedModel& model, int horizon);

/// One-step-ahead predictions over the test window with realized values fed
/// back into the conditioning state; no refitting.
std::vector<double> rolling_forecast_model(const FittedModel& model,
                                           std::span<const double> test_values);

/// Forecast-versus-actuals record for one (model, asset, period) cell.
struct ForecastEval {
    std::string model_name;
    std::string asset_id;
    std::string period_label;
    std::vector<double> forecasts;
    std::vector<double> actuals;
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;  // percent
};

struct BenchmarkCell {
    std::string model_name;
    std::string asset_id;
    std::string period_label;
    bool ok = false;
    std::string error;  // populated when !ok
    ForecastEval eval;  // populated when ok
    std::optional<double> rel_mae;  // MAE ratio against the ARIMA cell, when both exist
    std::optional<FittedModel> model;
};

/// AvgRelMAE pooled across assets for one (model, period).
struct PooledRelMae {
    std::string model_name;
    std::string period_label;
    double value = 1.0;
    int series_count = 0;
};

struct BenchmarkConfig {
    std::vector<PeriodSpec> periods = standard_periods();
    std::vector<ModelKind> models = {ModelKind::arima, ModelKind::ets_ann, ModelKind::knn};
    double split_ratio = 0.8;
    EvalMode mode = EvalMode::static_multi_step;
    std::uint64_t seed = 0;
    OrderSearch arima_search;
    NetConfig net;
    /// Neighbor count; when absent, k = round(sqrt(pattern count)).
    std::optional<int> knn_k;
    int knn_embed = 5;
    /// Min-max scale the kNN inputs (fitted on train). The neural component is
    /// always scaled; for uniform-weight Euclidean kNN this is a provable
    /// no-op on predictions and exists as an explicit switch, not a guess.
    bool knn_scale_inputs = false;
    /// Keep fitted models on the cells (needed for model serialization).
    bool keep_models = true;
};

struct BenchmarkGrid {
    std::vector<BenchmarkCell> cells;
    std::vector<PooledRelMae> pooled_rel_mae;
    std::string benchmark_model = "arima";
    EvalMode mode = EvalMode::static_multi_step;

    [[nodiscard]] bool all_ok() const;
    [[nodiscard]] const BenchmarkCell* find(const std::string& model, const std::string& asset,
                                            const std::string& period) const;
};

/**
 * @brief Runs the full model x asset x period evaluation.
 *
 * Each cell: slice the period, split train/test at the configured ratio, fit
 * on train closes, forecast the test window (static or rolling), and score
 * MAE/RMSE/MAPE on price levels. Relative MAE uses ARIMA as the benchmark,
 * per cell and pooled across assets per (model, period). Cell failures are
 * recorded in the grid, never aborting the run.
 *
 * Every cell derives its own seed from (seed, model, asset, period), so
 * partial reruns match full runs and the grid is deterministic.
 */
BenchmarkGrid run_benchmark(std::span<const PriceSeries> assets, const BenchmarkConfig& config);

}  // namespace marketcast
