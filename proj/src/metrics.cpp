#include "marketcast/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace marketcast {

namespace {

void check_lengths(std::span<const double> actuals, std::span<const double> forecasts) {
    if (actuals.empty() || actuals.size() != forecasts.size()) {
        throw std::invalid_argument("metrics: actuals and forecasts must share a nonzero length");
    }
}

}  // namespace

double mae(std::span<const double> actuals, std::span<const double> forecasts) {
    check_lengths(actuals, forecasts);
    double total = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        total += std::abs(actuals[i] - forecasts[i]);
    }
    return total / static_cast<double>(actuals.size());
}

double rmse(std::span<const double> actuals, std::span<const double> forecasts) {
    check_lengths(actuals, forecasts);
    double total = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        const double d = actuals[i] - forecasts[i];
        total += d * d;
    }
    return std::sqrt(total / static_cast<double>(actuals.size()));
}

double mape(std::span<const double> actuals, std::span<const double> forecasts) {
    check_lengths(actuals, forecasts);
    double total = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        if (actuals[i] == 0.0) {
            throw std::invalid_argument("mape: zero actual value");
        }
        total += std::abs(actuals[i] - forecasts[i]) / std::abs(actuals[i]);
    }
    return 100.0 * total / static_cast<double>(actuals.size());
}

double avg_rel_mae(std::span<const double> model_maes, std::span<const double> benchmark_maes) {
    if (model_maes.empty() || model_maes.size() != benchmark_maes.size()) {
        throw std::invalid_argument("avg_rel_mae: MAE lists must share a nonzero length");
    }
    double log_sum = 0.0;
    for (std::size_t i = 0; i < model_maes.size(); ++i) {
        if (!(model_maes[i] > 0.0) || !(benchmark_maes[i] > 0.0)) {
            throw std::invalid_argument("avg_rel_mae: MAE values must be strictly positive");
        }
        log_sum += std::log(model_maes[i] / benchmark_maes[i]);
    }
    return std::exp(log_sum / static_cast<double>(model_maes.size()));
}

}  // namespace marketcast
