#pragma once

#include <span>
#include <vector>

#include "marketcast/market_data.hpp"

namespace marketcast {

/**
 * @brief Min-max scaler to [0, 1] with an exact algebraic inverse.
 *
 * Fitted bounds come from the training data only. Values outside the fitted
 * range (test data under a train-fitted scaler) pass through unclipped, so
 * inverse_transform stays exact.
 */
class MinMaxScaler {
public:
    MinMaxScaler(double lo, double hi);

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }

    [[nodiscard]] double transform(double x) const { return (x - lo_) / (hi_ - lo_); }
    [[nodiscard]] double inverse_transform(double u) const { return lo_ + u * (hi_ - lo_); }

    [[nodiscard]] std::vector<double> transform(std::span<const double> x) const;
    [[nodiscard]] std::vector<double> inverse_transform(std::span<const double> u) const;

private:
    double lo_;
    double hi_;
};

/**
 * @brief Fits scaler bounds lo = min(x), hi = max(x).
 * @throws std::invalid_argument on fewer than 2 values or a constant input.
 */
MinMaxScaler fit_scaler(std::span<const double> x);

/**
 * @brief One-period log returns: out[t] = ln(close[t+1] / close[t]).
 * @throws std::invalid_argument on nonpositive prices or length < 2.
 */
std::vector<double> log_returns(std::span<const double> closes);

std::vector<double> log_returns(const PriceSeries& series);

}  // namespace marketcast
