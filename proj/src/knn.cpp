#include "marketcast/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marketcast {

KnnModel fit_knn(std::span<const double> y, const KnnConfig& config) {
    if (config.k < 1 || config.embed < 1) {
        throw std::invalid_argument("fit_knn: k and embedding dimension must be >= 1");
    }
    const std::size_t m = static_cast<std::size_t>(config.embed);
    if (y.size() <= m) {
        throw std::invalid_argument("fit_knn: series no longer than the embedding dimension");
    }
    const std::size_t pattern_count = y.size() - m;
    if (pattern_count < static_cast<std::size_t>(config.k)) {
        throw std::invalid_argument("fit_knn: fewer patterns than neighbors requested");
    }
    KnnModel model;
    model.config = config;
    std::vector<double> scaled;
    std::span<const double> values = y;
    if (config.scale_inputs) {
        model.scaler = fit_scaler(y);
        scaled = model.scaler->transform(y);
        values = scaled;
    }
    model.patterns.reserve(pattern_count);
    model.successors.reserve(pattern_count);
    for (std::size_t i = 0; i < pattern_count; ++i) {
        model.patterns.emplace_back(values.begin() + static_cast<long>(i),
                                    values.begin() + static_cast<long>(i + m));
        model.successors.push_back(values[i + m]);
    }
    return model;
}

double predict_knn(const KnnModel& model, std::span<const double> query) {
    if (query.size() != static_cast<std::size_t>(model.config.embed)) {
        throw std::invalid_argument("predict_knn: query length mismatch");
    }
    std::vector<double> scaled_query;
    if (model.scaler.has_value()) {
        scaled_query = model.scaler->transform(query);
        query = scaled_query;
    }
    const std::size_t k = static_cast<std::size_t>(model.config.k);
    // (squared distance, pattern index); pair ordering breaks ties by index.
    std::vector<std::pair<double, std::size_t>> distances;
    distances.reserve(model.patterns.size());
    for (std::size_t i = 0; i < model.patterns.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            const double diff = model.patterns[i][j] - query[j];
            d2 += diff * diff;
        }
        distances.emplace_back(d2, i);
    }
    std::partial_sort(distances.begin(), distances.begin() + static_cast<long>(k), distances.end());
    double total = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        total += model.successors[distances[r].second];
    }
    const double mean = total / static_cast<double>(k);
    return model.scaler.has_value() ? model.scaler->inverse_transform(mean) : mean;
}

std::vector<double> last_training_window(const KnnModel& model) {
    // last pattern shifted by one plus its successor
    std::vector<double> window(model.patterns.back().begin() + 1, model.patterns.back().end());
    window.push_back(model.successors.back());
    if (model.scaler.has_value()) window = model.scaler->inverse_transform(window);
    return window;
}

std::vector<double> forecast_knn(const KnnModel& model, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    std::vector<double> window = last_training_window(model);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int step = 0; step < horizon; ++step) {
        const double prediction = predict_knn(model, window);
        out.push_back(prediction);
        window.erase(window.begin());
        window.push_back(prediction);
    }
    return out;
}

}  // namespace marketcast
