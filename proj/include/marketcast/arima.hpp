#pragma once

#include <span>
#include <string>
#include <vector>

namespace marketcast {

/// Non-seasonal ARIMA order. The benchmark search covers p, q in 0..5, d in {0, 1}.
struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    [[nodiscard]] std::string to_string() const;
};

/**
 * @brief Fitted ARIMA(p,d,q) model, estimated by conditional sum of squares.
 *
 * The mean-form parameterization is used: with z the d-differenced series and
 * w_t = z_t - intercept,
 *   w_t = sum_i ar[i] * w_{t-i} + e_t + sum_j ma[j] * e_{t-j}.
 * The intercept is the process mean of z (estimated for d = 0, fixed at 0 for
 * d = 1, i.e. no drift). Innovations before max(p, q) are initialized to 0 and
 * the sum of squares runs over the remaining n_effective terms.
 */
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> ar;
    std::vector<double> ma;
    double intercept = 0.0;
    double sigma2 = 0.0;
    double aic = 0.0;
    int n_effective = 0;

    // State retained for forecasting: the tail of the mean-adjusted differenced
    // series (p values), the last q innovations, and the last original level.
    std::vector<double> diff_tail;
    std::vector<double> innovation_tail;
    double last_level = 0.0;
};

/// Order-search bounds and selection settings for select_order.
struct OrderSearch {
    int max_p = 5;
    int max_q = 5;

    /// Candidate differencing orders. With both 0 and 1 present, d is decided
    /// by a unit-root pretest (ADF at the 5% level) rather than by comparing
    /// information criteria across differencing: IC values on differently
    /// differenced samples are not comparable, and the comparison mis-picks d
    /// on unit-root data a material fraction of the time.
    std::vector<int> d_choices = {0, 1};

    /// Penalty per parameter for the (p, q) search: AIC uses 2, BIC uses
    /// ln(n). BIC is the default because its consistency keeps white noise
    /// from sprouting spurious AR/MA terms; per-model AIC values are always
    /// computed and reported.
    enum class Criterion { aic, bic };
    Criterion criterion = Criterion::bic;
};

/// Applies d rounds of first differencing.
std::vector<double> difference(std::span<const double> x, int d);

/// Inverse of one round of differencing given the first original value.
std::vector<double> undifference_once(std::span<const double> diffs, double first_value);

/**
 * @brief Fits ARIMA(p,d,q) by minimizing the conditional sum of squared
 *        innovations (Nelder-Mead, multistart: zero vector plus a
 *        Hannan-Rissanen style estimate).
 *
 * sigma2 = SSE / n_effective and aic = n_effective * ln(sigma2) + 2(p+q+2).
 * The fitted AR polynomial is required to have all roots of modulus > 1.001
 * and the MA polynomial all roots outside the unit circle; a non-invertible
 * optimum is retried once from a perturbed start and then reported.
 *
 * @throws std::invalid_argument on insufficient data,
 *         std::runtime_error on non-stationary / non-invertible optima.
 */
ArimaModel fit_arima(std::span<const double> y, const ArimaOrder& order);

/**
 * @brief Fits every order in the search grid and returns the model with the
 *        best information-criterion score; exact ties prefer fewer parameters,
 *        then lower q. Orders that fail to fit are skipped.
 * @throws std::runtime_error when no grid member converges.
 */
ArimaModel select_order(std::span<const double> y, const OrderSearch& search = {});

/**
 * @brief Iterated-expectation h-step forecast on the original scale.
 *
 * Future innovations are set to zero, known innovations enter the MA part,
 * and differenced forecasts are integrated back from the last observed level.
 */
std::vector<double> forecast_arima(const ArimaModel& model, int horizon);

}  // namespace marketcast
