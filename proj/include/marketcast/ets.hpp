#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace marketcast {

/**
 * @brief Innovation-state-space exponential smoothing with additive error and
 *        additive damped trend, no seasonality.
 *
 * One-step recursion:
 *   e_t = y_t - (l_{t-1} + phi * b_{t-1})
 *   l_t = l_{t-1} + phi * b_{t-1} + alpha * e_t
 *   b_t = phi * b_{t-1} + beta * e_t
 *
 * Parameter boxes: alpha in (0, 1), beta in (0, alpha), phi in [0.8, 0.98].
 */
struct EtsModel {
    double alpha = 0.5;
    double beta = 0.1;
    double phi = 0.9;
    double initial_level = 0.0;
    double initial_trend = 0.0;
    double final_level = 0.0;
    double final_trend = 0.0;
    double sse = 0.0;
    std::size_t train_size = 0;
};

/**
 * @brief Fits the smoothing parameters and initial states by minimizing the
 *        one-step sum of squared errors.
 *
 * The smoothing parameters are searched by multistart Nelder-Mead inside
 * their boxes; for each candidate the initial states are profiled out exactly
 * (the errors are affine in (l0, b0), so the inner problem is linear least
 * squares). This joint estimate makes the SSE objective well defined.
 *
 * @throws std::invalid_argument with fewer than 10 observations,
 *         std::runtime_error when the optimizer fails to produce a finite fit.
 */
EtsModel fit_ets(std::span<const double> y);

/// Damped-trend forecast: y_hat(h) = final_level + (phi + ... + phi^h) * final_trend.
std::vector<double> forecast_ets(const EtsModel& model, int horizon);

/**
 * @brief One-step-ahead in-sample errors e_t = y_t - (l_{t-1} + phi*b_{t-1}),
 *        length n. The input must be the series the model was fitted on.
 * @throws std::invalid_argument on length mismatch.
 */
std::vector<double> residuals_ets(const EtsModel& model, std::span<const double> y);

}  // namespace marketcast
