#pragma once

#include <span>

namespace marketcast {

/// Mean absolute error over equal-length vectors.
double mae(std::span<const double> actuals, std::span<const double> forecasts);

/// Root mean square error.
double rmse(std::span<const double> actuals, std::span<const double> forecasts);

/// Mean absolute percentage error, in percent. Requires nonzero actuals.
double mape(std::span<const double> actuals, std::span<const double> forecasts);

/// Geometric mean of per-series MAE ratios against a benchmark; 1.0 = parity.
/// All MAE values must be strictly positive.
double avg_rel_mae(std::span<const double> model_maes, std::span<const double> benchmark_maes);

}  // namespace marketcast
