#include "marketcast/serialize.hpp"

#include <stdexcept>

namespace marketcast {

using nlohmann::json;

json arima_to_json(const ArimaModel& model) {
    return json{
        {"type", "arima"},
        {"order", {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}}},
        {"ar", model.ar},
        {"ma", model.ma},
        {"intercept", model.intercept},
        {"sigma2", model.sigma2},
        {"aic", model.aic},
        {"n_effective", model.n_effective},
    };
}

json ets_to_json(const EtsModel& model) {
    return json{
        {"type", "ets"},
        {"alpha", model.alpha},
        {"beta", model.beta},
        {"phi", model.phi},
        {"initial_level", model.initial_level},
        {"initial_trend", model.initial_trend},
        {"final_level", model.final_level},
        {"final_trend", model.final_trend},
        {"sse", model.sse},
        {"train_size", model.train_size},
    };
}

json knn_to_json(const KnnModel& model) {
    return json{
        {"type", "knn"},
        {"k", model.config.k},
        {"embed", model.config.embed},
        {"weights", "uniform"},
        {"metric_p", 2},
        {"search", "brute"},
        {"scale_inputs", model.config.scale_inputs},
        {"pattern_count", model.patterns.size()},
    };
}

namespace {
constexpr int kNetSchemaVersion = 1;
}

json net_to_json(const ResidualNet& net) {
    const NetConfig& config = net.config();
    return json{
        {"type", "residual-net"},
        {"schema_version", kNetSchemaVersion},
        {"config",
         {{"hidden_units", config.hidden_units},
          {"dropout_rate", config.dropout_rate},
          {"epochs", config.epochs},
          {"batch_size", config.batch_size},
          {"learning_rate", config.learning_rate},
          {"adam_beta1", config.adam_beta1},
          {"adam_beta2", config.adam_beta2},
          {"adam_epsilon", config.adam_epsilon},
          {"window", config.window},
          {"seed", config.seed}}},
        {"scaler", {{"lo", net.scaler().lo()}, {"hi", net.scaler().hi()}}},
        {"parameters", net.parameters()},
        {"loss_trace", net.loss_trace()},
        {"batch_size_reduced", net.batch_size_reduced()},
    };
}

ResidualNet net_from_json(const json& record) {
    if (record.value("schema_version", -1) != kNetSchemaVersion) {
        throw std::invalid_argument("residual-net record has an unsupported schema version");
    }
    const json& c = record.at("config");
    NetConfig config;
    config.hidden_units = c.at("hidden_units").get<int>();
    config.dropout_rate = c.at("dropout_rate").get<double>();
    config.epochs = c.at("epochs").get<int>();
    config.batch_size = c.at("batch_size").get<int>();
    config.learning_rate = c.at("learning_rate").get<double>();
    config.adam_beta1 = c.at("adam_beta1").get<double>();
    config.adam_beta2 = c.at("adam_beta2").get<double>();
    config.adam_epsilon = c.at("adam_epsilon").get<double>();
    config.window = c.at("window").get<int>();
    config.seed = c.at("seed").get<std::uint64_t>();
    MinMaxScaler scaler(record.at("scaler").at("lo").get<double>(),
                        record.at("scaler").at("hi").get<double>());
    return ResidualNet(config, record.at("parameters").get<std::vector<double>>(), scaler,
                       record.at("loss_trace").get<std::vector<double>>(),
                       record.value("batch_size_reduced", false));
}

json hybrid_to_json(const HybridModel& model) {
    return json{
        {"type", "ets-ann"},
        {"linear", ets_to_json(model.linear)},
        {"nonlinear", net_to_json(model.nonlinear)},
        {"residual_count", model.training_residuals.size()},
    };
}

json model_to_json(const FittedModel& model) {
    return std::visit(
        [](const auto& fitted) -> json {
            using T = std::decay_t<decltype(fitted)>;
            if constexpr (std::is_same_v<T, ArimaModel>) {
                return arima_to_json(fitted);
            } else if constexpr (std::is_same_v<T, EtsModel>) {
                return ets_to_json(fitted);
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                return knn_to_json(fitted);
            } else {
                return hybrid_to_json(fitted);
            }
        },
        model);
}

json report_to_json(const DescriptiveReport& report) {
    json critical = json::object();
    for (const auto& [level, value] : report.adf.critical_values) {
        critical[std::to_string(level)] = value;
    }
    return json{
        {"mean", report.mean},
        {"std_dev", report.std_dev},
        {"min", report.min},
        {"max", report.max},
        {"sharpe", report.sharpe},
        {"std_err", report.std_err},
        {"adf",
         {{"statistic", report.adf.statistic},
          {"lags", report.adf.lags_used},
          {"reject_at", to_string(report.adf.reject_at)},
          {"critical_values", critical}}},
        {"jb",
         {{"statistic", report.jb.statistic},
          {"skewness", report.jb.skewness},
          {"excess_kurtosis", report.jb.excess_kurtosis},
          {"p_value", report.jb.p_value}}},
        {"n", report.n},
    };
}

json grid_to_json(const BenchmarkGrid& grid) {
    json cells = json::array();
    for (const auto& cell : grid.cells) {
        json entry{
            {"model", cell.model_name},
            {"asset", cell.asset_id},
            {"period", cell.period_label},
            {"status", cell.ok ? "ok" : "failed"},
        };
        if (cell.ok) {
            entry["mae"] = cell.eval.mae;
            entry["rmse"] = cell.eval.rmse;
            entry["mape"] = cell.eval.mape;
            if (cell.rel_mae.has_value()) entry["avg_rel_mae"] = *cell.rel_mae;
        } else {
            entry["error"] = cell.error;
        }
        cells.push_back(std::move(entry));
    }
    json pooled = json::array();
    for (const auto& row : grid.pooled_rel_mae) {
        pooled.push_back(json{{"model", row.model_name},
                              {"period", row.period_label},
                              {"avg_rel_mae", row.value},
                              {"series_count", row.series_count}});
    }
    return json{
        {"benchmark_model", grid.benchmark_model},
        {"mode", to_string(grid.mode)},
        {"cells", std::move(cells)},
        {"pooled_avg_rel_mae", std::move(pooled)},
    };
}

}  // namespace marketcast
