#include "marketcast/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "marketcast/rng.hpp"

namespace marketcast {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::arima: return "arima";
        case ModelKind::ets_ann: return "ets-ann";
        case ModelKind::knn: return "knn";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "arima") return ModelKind::arima;
    if (name == "ets-ann" || name == "ets_ann" || name == "hybrid") return ModelKind::ets_ann;
    if (name == "knn") return ModelKind::knn;
    throw std::invalid_argument("unknown model name: '" + name + "'");
}

std::string to_string(EvalMode mode) {
    return mode == EvalMode::static_multi_step ? "static" : "rolling";
}

EvalMode eval_mode_from_string(const std::string& name) {
    if (name == "static") return EvalMode::static_multi_step;
    if (name == "rolling") return EvalMode::rolling_one_step;
    throw std::invalid_argument("unknown evaluation mode: '" + name + "'");
}

std::vector<double> forecast_model(const FittedModel& model, int horizon) {
    return std::visit(
        [&](const auto& fitted) -> std::vector<double> {
            using T = std::decay_t<decltype(fitted)>;
            if constexpr (std::is_same_v<T, ArimaModel>) {
                return forecast_arima(fitted, horizon);
            } else if constexpr (std::is_same_v<T, EtsModel>) {
                return forecast_ets(fitted, horizon);
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                return forecast_knn(fitted, horizon);
            } else {
                return forecast_hybrid(fitted, horizon);
            }
        },
        model);
}

namespace {

std::vector<double> rolling_arima(const ArimaModel& model, std::span<const double> test) {
    std::vector<double> w(model.diff_tail.rbegin(), model.diff_tail.rend());
    std::vector<double> eps(model.innovation_tail.rbegin(), model.innovation_tail.rend());
    double level = model.last_level;
    std::vector<double> out;
    out.reserve(test.size());
    for (double actual : test) {
        double w_hat = 0.0;
        for (int i = 0; i < model.order.p; ++i) {
            w_hat += model.ar[static_cast<std::size_t>(i)] * w[w.size() - 1 - static_cast<std::size_t>(i)];
        }
        for (int j = 0; j < model.order.q; ++j) {
            if (eps.size() > static_cast<std::size_t>(j)) {
                w_hat += model.ma[static_cast<std::size_t>(j)] *
                         eps[eps.size() - 1 - static_cast<std::size_t>(j)];
            }
        }
        const double pred_diff = w_hat + model.intercept;
        out.push_back(model.order.d == 1 ? level + pred_diff : pred_diff);

        const double actual_diff = model.order.d == 1 ? actual - level : actual;
        const double actual_w = actual_diff - model.intercept;
        eps.push_back(actual_w - w_hat);
        w.push_back(actual_w);
        level = actual;
    }
    return out;
}

std::vector<double> rolling_ets(const EtsModel& model, std::span<const double> test) {
    double level = model.final_level;
    double trend = model.final_trend;
    std::vector<double> out;
    out.reserve(test.size());
    for (double actual : test) {
        const double pred = level + model.phi * trend;
        out.push_back(pred);
        const double e = actual - pred;
        level = pred + model.alpha * e;
        trend = model.phi * trend + model.beta * e;
    }
    return out;
}

std::vector<double> rolling_knn(const KnnModel& model, std::span<const double> test) {
    std::vector<double> window = last_training_window(model);
    std::vector<double> out;
    out.reserve(test.size());
    for (double actual : test) {
        out.push_back(predict_knn(model, window));
        window.erase(window.begin());
        window.push_back(actual);
    }
    return out;
}

std::vector<double> rolling_hybrid(const HybridModel& model, std::span<const double> test) {
    const int window_len = model.nonlinear.config().window;
    if (static_cast<int>(model.training_residuals.size()) < window_len) {
        throw std::runtime_error("rolling hybrid: too few residuals for the network window");
    }
    std::vector<double> residual_window(
        model.training_residuals.end() - window_len, model.training_residuals.end());
    double level = model.linear.final_level;
    double trend = model.linear.final_trend;
    std::vector<double> out;
    out.reserve(test.size());
    for (double actual : test) {
        const double ets_pred = level + model.linear.phi * trend;
        const double net_pred = predict_residuals(model.nonlinear, residual_window, 1).front();
        out.push_back(ets_pred + net_pred);

        const double e = actual - ets_pred;
        level = ets_pred + model.linear.alpha * e;
        trend = model.linear.phi * trend + model.linear.beta * e;
        residual_window.erase(residual_window.begin());
        residual_window.push_back(e);
    }
    return out;
}

int default_knn_k(std::size_t pattern_count) {
    const int k = static_cast<int>(std::llround(std::sqrt(static_cast<double>(pattern_count))));
    return std::clamp(k, 1, static_cast<int>(pattern_count));
}

FittedModel fit_cell_model(ModelKind kind, std::span<const double> train,
                           const BenchmarkConfig& config, std::uint64_t cell_seed) {
    switch (kind) {
        case ModelKind::arima:
            return select_order(train, config.arima_search);
        case ModelKind::ets_ann: {
            NetConfig net = config.net;
            net.seed = cell_seed;
            return fit_hybrid(train, net);
        }
        case ModelKind::knn: {
            KnnConfig knn;
            knn.embed = config.knn_embed;
            knn.scale_inputs = config.knn_scale_inputs;
            const std::size_t patterns =
                train.size() > static_cast<std::size_t>(config.knn_embed)
                    ? train.size() - static_cast<std::size_t>(config.knn_embed)
                    : 0;
            knn.k = config.knn_k.value_or(default_knn_k(patterns));
            return fit_knn(train, knn);
        }
    }
    throw std::logic_error("unreachable model kind");
}

}  // namespace

std::vector<double> rolling_forecast_model(const FittedModel& model,
                                           std::span<const double> test_values) {
    return std::visit(
        [&](const auto& fitted) -> std::vector<double> {
            using T = std::decay_t<decltype(fitted)>;
            if constexpr (std::is_same_v<T, ArimaModel>) {
                return rolling_arima(fitted, test_values);
            } else if constexpr (std::is_same_v<T, EtsModel>) {
                return rolling_ets(fitted, test_values);
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                return rolling_knn(fitted, test_values);
            } else {
                return rolling_hybrid(fitted, test_values);
            }
        },
        model);
}

bool BenchmarkGrid::all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const BenchmarkCell& c) { return c.ok; });
}

const BenchmarkCell* BenchmarkGrid::find(const std::string& model, const std::string& asset,
                                         const std::string& period) const {
    for (const auto& cell : cells) {
        if (cell.model_name == model && cell.asset_id == asset && cell.period_label == period) {
            return &cell;
        }
    }
    return nullptr;
}

BenchmarkGrid run_benchmark(std::span<const PriceSeries> assets, const BenchmarkConfig& config) {
    BenchmarkGrid grid;
    grid.mode = config.mode;

    for (const PeriodSpec& period : config.periods) {
        for (const PriceSeries& asset : assets) {
            for (ModelKind kind : config.models) {
                BenchmarkCell cell;
                cell.model_name = to_string(kind);
                cell.asset_id = asset.asset_id();
                cell.period_label = period.label;
                const std::uint64_t cell_seed = derive_seed(
                    config.seed, cell.model_name + "|" + cell.asset_id + "|" + cell.period_label);
                try {
                    const PriceSeries slice = slice_period(asset, period);
                    const TrainTestSplit split = split_train_test(slice, config.split_ratio);
                    const std::vector<double>& train = split.train.closes();
                    const std::vector<double>& test = split.test.closes();

                    FittedModel model = fit_cell_model(kind, train, config, cell_seed);
                    std::vector<double> forecasts =
                        config.mode == EvalMode::static_multi_step
                            ? forecast_model(model, static_cast<int>(test.size()))
                            : rolling_forecast_model(model, test);

                    cell.eval.model_name = cell.model_name;
                    cell.eval.asset_id = cell.asset_id;
                    cell.eval.period_label = cell.period_label;
                    cell.eval.actuals = test;
                    cell.eval.forecasts = std::move(forecasts);
                    cell.eval.mae = mae(cell.eval.actuals, cell.eval.forecasts);
                    cell.eval.rmse = rmse(cell.eval.actuals, cell.eval.forecasts);
                    cell.eval.mape = mape(cell.eval.actuals, cell.eval.forecasts);
                    if (config.keep_models) cell.model = std::move(model);
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.ok = false;
                    cell.error = e.what();
                }
                grid.cells.push_back(std::move(cell));
            }
        }
    }

    // Relative MAE against the ARIMA cell of the same (asset, period).
    std::map<std::pair<std::string, std::string>, double> arima_mae;
    for (const auto& cell : grid.cells) {
        if (cell.ok && cell.model_name == grid.benchmark_model) {
            arima_mae[{cell.asset_id, cell.period_label}] = cell.eval.mae;
        }
    }
    for (auto& cell : grid.cells) {
        if (!cell.ok) continue;
        const auto it = arima_mae.find({cell.asset_id, cell.period_label});
        if (it != arima_mae.end() && it->second > 0.0 && cell.eval.mae > 0.0) {
            cell.rel_mae = cell.eval.mae / it->second;
        }
    }
    for (ModelKind kind : config.models) {
        const std::string model_name = to_string(kind);
        for (const PeriodSpec& period : config.periods) {
            std::vector<double> model_maes, bench_maes;
            for (const auto& cell : grid.cells) {
                if (!cell.ok || cell.model_name != model_name || cell.period_label != period.label) {
                    continue;
                }
                const auto it = arima_mae.find({cell.asset_id, cell.period_label});
                if (it == arima_mae.end()) continue;
                model_maes.push_back(cell.eval.mae);
                bench_maes.push_back(it->second);
            }
            if (model_maes.empty()) continue;
            PooledRelMae pooled;
            pooled.model_name = model_name;
            pooled.period_label = period.label;
            pooled.value = avg_rel_mae(model_maes, bench_maes);
            pooled.series_count = static_cast<int>(model_maes.size());
            grid.pooled_rel_mae.push_back(std::move(pooled));
        }
    }
    return grid;
}

}  // namespace marketcast
