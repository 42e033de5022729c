#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "marketcast/preprocess.hpp"

namespace marketcast {

/// Lag-embedded k-nearest-neighbor regression: uniform weights, Euclidean
/// distance, brute-force search.
struct KnnConfig {
    int k = 1;
    int embed = 5;  // lag-embedding dimension m
    /// Min-max scale inputs before embedding. For uniform weights and a
    /// Euclidean metric this cannot change predictions (the map is affine and
    /// shared by every coordinate); the switch exists so runs can state the
    /// choice explicitly.
    bool scale_inputs = false;
};

struct KnnModel {
    std::vector<std::vector<double>> patterns;  // length-m windows
    std::vector<double> successors;             // value following each window
    KnnConfig config;
    std::optional<MinMaxScaler> scaler;  // present when config.scale_inputs
};

/// Stores every length-m window and its successor; no other computation.
/// @throws std::invalid_argument when n <= m or fewer than k patterns exist.
KnnModel fit_knn(std::span<const double> y, const KnnConfig& config);

/// The last m training values, in natural (unscaled) units.
std::vector<double> last_training_window(const KnnModel& model);

/// Mean of the successors of the k closest patterns (ties at the k-th
/// distance resolved in favor of earlier pattern indices).
double predict_knn(const KnnModel& model, std::span<const double> query);

/// Recursive multi-step forecast starting from the last m training values.
std::vector<double> forecast_knn(const KnnModel& model, int horizon);

}  // namespace marketcast
