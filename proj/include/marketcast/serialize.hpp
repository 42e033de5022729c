#pragma once

#include <json.hpp>

#include "marketcast/benchmark.hpp"
#include "marketcast/descriptive_stats.hpp"

namespace marketcast {

nlohmann::json arima_to_json(const ArimaModel& model);
nlohmann::json ets_to_json(const EtsModel& model);
nlohmann::json knn_to_json(const KnnModel& model);

/// Flat weight record with a schema version; exact reload supported.
nlohmann::json net_to_json(const ResidualNet& net);
ResidualNet net_from_json(const nlohmann::json& record);

nlohmann::json hybrid_to_json(const HybridModel& model);
nlohmann::json model_to_json(const FittedModel& model);

nlohmann::json report_to_json(const DescriptiveReport& report);
nlohmann::json grid_to_json(const BenchmarkGrid& grid);

}  // namespace marketcast
