#pragma once

#include <span>
#include <vector>

#include "marketcast/ets.hpp"
#include "marketcast/residual_net.hpp"

namespace marketcast {

/**
 * @brief Two-stage additive forecaster: exponential smoothing captures the
 *        linear component, a recurrent network models the smoothing residuals,
 *        and forecasts are the element-wise sum of the two parts.
 */
struct HybridModel {
    EtsModel linear;
    ResidualNet nonlinear;
    std::vector<double> training_residuals;
};

/**
 * @brief Fixed pipeline: fit_ets -> residuals_ets -> train the network on
 *        exactly those residuals. The smoothing model is never refitted.
 * @throws whatever fit_ets or train throw for their preconditions.
 */
HybridModel fit_hybrid(std::span<const double> y, const NetConfig& net_config);

/// forecast_ets(linear, h) + predict_residuals(nonlinear, last window, h).
std::vector<double> forecast_hybrid(const HybridModel& model, int horizon);

}  // namespace marketcast
