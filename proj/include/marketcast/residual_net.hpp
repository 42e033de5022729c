#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "marketcast/preprocess.hpp"

namespace marketcast {

/// Training configuration for the residual network (single LSTM layer plus a
/// linear readout, trained with Adam on mean squared error).
struct NetConfig {
    int hidden_units = 50;
    double dropout_rate = 0.2;
    int epochs = 100;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    int window = 10;  // input lag count
    std::uint64_t seed = 0;
};

/// Supervised framing of a series: inputs[i] = e[i .. i+w), targets[i] = e[i+w].
struct WindowDataset {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
};

/// @throws std::invalid_argument when n <= window.
WindowDataset make_windows(std::span<const double> e, int window);

/**
 * @brief Recurrent regression network over scaled residual windows.
 *
 * The LSTM cell is implemented from first principles with hand-derived
 * backpropagation through time; gradient_check validates it against central
 * finite differences. All weights live in one flat parameter vector (gate
 * order: input, forget, candidate, output; then the readout).
 *
 * Training is fully deterministic given (data, config, seed): weight
 * initialization, epoch shuffling, and dropout masks all draw from one
 * seeded stream. Inference never applies dropout.
 */
class ResidualNet {
public:
    ResidualNet(NetConfig config, std::vector<double> parameters, MinMaxScaler scaler,
                std::vector<double> loss_trace, bool batch_size_reduced);

    [[nodiscard]] const NetConfig& config() const { return config_; }
    [[nodiscard]] const std::vector<double>& parameters() const { return parameters_; }
    [[nodiscard]] const MinMaxScaler& scaler() const { return scaler_; }
    [[nodiscard]] const std::vector<double>& loss_trace() const { return loss_trace_; }
    /// True when the configured batch size exceeded half the sample count and
    /// was shrunk to the sample count.
    [[nodiscard]] bool batch_size_reduced() const { return batch_size_reduced_; }

    /// Single forward pass on an already-scaled window (no dropout).
    [[nodiscard]] double forward_scaled(std::span<const double> scaled_window) const;

private:
    NetConfig config_;
    std::vector<double> parameters_;
    MinMaxScaler scaler_;
    std::vector<double> loss_trace_;
    bool batch_size_reduced_;
};

/**
 * @brief Trains the network on a residual sequence.
 *
 * The scaler is fitted on the full input sequence (training residuals only by
 * construction of the hybrid pipeline); a constant sequence degrades to an
 * identity-width scaler instead of failing. Weights start uniform(-0.05, 0.05)
 * with the forget-gate bias at 1.
 *
 * @throws std::invalid_argument on insufficient data,
 *         std::runtime_error on divergence (non-finite loss).
 */
ResidualNet train(std::span<const double> residuals, const NetConfig& config);

/**
 * @brief Recursive multi-step prediction in residual units.
 *
 * Each step feeds the previous prediction back into the window. Dropout is
 * disabled; outputs are inverse-transformed back to residual units.
 *
 * @throws std::invalid_argument when the window length does not match.
 */
std::vector<double> predict_residuals(const ResidualNet& net, std::span<const double> last_window,
                                      int horizon);

/**
 * @brief Compares analytic gradients against central finite differences
 *        (step 1e-5) on the given samples, dropout forced to 0.
 * @return max over parameters of |analytic - numeric| / max(|a| + |n|, 1e-4).
 */
double gradient_check(const NetConfig& config, const std::vector<std::vector<double>>& inputs,
                      std::span<const double> targets);

/// Convenience overload: seeded random weights, inputs, and targets.
double gradient_check(const NetConfig& config);

}  // namespace marketcast
