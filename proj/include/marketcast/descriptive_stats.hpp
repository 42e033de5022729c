#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace marketcast {

/// Significance level at which a test rejects its null, finest first.
enum class Significance { p001, p01, p05, p10, none };

std::string to_string(Significance s);

/**
 * @brief Augmented Dickey-Fuller unit-root test result (constant, no trend).
 *
 * statistic is the OLS t-ratio of the lagged-level coefficient in
 *   dx_t = a + b * x_{t-1} + sum_i c_i * dx_{t-i} + w_t.
 * reject_at is the finest level in {0.001, 0.01, 0.05, 0.10} at which the
 * unit-root null is rejected against the embedded critical values.
 */
struct AdfResult {
    double statistic = 0.0;
    int lags_used = 0;
    Significance reject_at = Significance::none;
    std::map<double, double> critical_values;  // level -> critical value
};

/// Jarque-Bera normality test result.
struct JbResult {
    double statistic = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double p_value = 1.0;
};

/**
 * @brief One summary row over a return series: moments, Sharpe ratio,
 *        standard error, and the two stationarity/normality tests.
 */
struct DescriptiveReport {
    double mean = 0.0;
    double std_dev = 0.0;  // unbiased (n-1) denominator
    double min = 0.0;
    double max = 0.0;
    double sharpe = 0.0;  // (mean - risk_free) / std_dev
    double std_err = 0.0;  // std_dev / sqrt(n)
    AdfResult adf;
    JbResult jb;
    std::size_t n = 0;
};

/**
 * @brief Computes the full descriptive report for a return series.
 *
 * @param returns   daily (log) returns, length >= 8
 * @param risk_free daily risk-free rate used in the Sharpe ratio (default 0)
 * @throws std::invalid_argument on too-short or constant input.
 */
DescriptiveReport describe(std::span<const double> returns, double risk_free = 0.0);

/**
 * @brief ADF test with constant and no trend.
 *
 * When lags is not given, the lag order is selected by AIC over
 * k = 0..floor(12 * (n/100)^0.25), the Schwert rule supplying the upper
 * bound. Critical values follow MacKinnon-style response surfaces for the
 * constant case; see the implementation for the embedded constants and their
 * source.
 *
 * @throws std::invalid_argument on insufficient length; std::runtime_error on
 *         a singular regression (e.g. constant input).
 */
AdfResult adf_test(std::span<const double> x, std::optional<int> lags = std::nullopt);

/**
 * @brief Jarque-Bera test; statistic = n/6 * (S^2 + (K-3)^2 / 4) with biased
 *        moment estimators, p-value from the chi-square(2) survival function.
 * @throws std::invalid_argument on n < 8 or constant input.
 */
JbResult jarque_bera(std::span<const double> x);

/**
 * @brief Pearson correlation matrix of pre-aligned return series.
 *
 * All sequences must share one length >= 3 and be non-constant. The result is
 * exactly symmetric with a unit diagonal.
 */
std::vector<std::vector<double>> correlation_matrix(
    const std::vector<std::vector<double>>& aligned_returns);

}  // namespace marketcast
